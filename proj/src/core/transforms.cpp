#include "transforms.hpp"

#include <algorithm>

#include "error.hpp"

namespace blocktrid {

namespace {

void require_operator(const OperatorMatrix& t, const char* where) {
  if (!t.is_square() || t.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, std::string(where) + ": operator must be square and non-empty");
  if (!t.all_finite())
    throw Error(ErrorCode::NonFinite, std::string(where) + ": operator has non-finite entries");
}

BuildOptions build_options(const TransformOptions& options) {
  BuildOptions b;
  b.tol = options.dependence_tol;
  return b;
}

SparsifiedForm finish(SparsifiedForm form, const TransformOptions& options) {
  form.report = full_report(form, options.threshold);
  return form;
}

SparsifiedForm from_build(const OperatorMatrix& t, BuildResult build, FormKind kind) {
  SparsifiedForm form;
  form.input = t;
  form.transformed = conjugate(t, build.basis);
  form.basis = std::move(build.basis);
  form.kind = kind;
  form.log = std::move(build.log);
  if (kind == FormKind::Hessenberg || kind == FormKind::JointCyclic)
    form.segments = std::move(build.segments);
  return form;
}

BlockSchedule require_general_schedule(const BlockSchedule& schedule, std::size_t d) {
  if (auto bad = validate(schedule.sizes(), ScheduleKind::General))
    throw Error(ErrorCode::Schedule, "schedule " + schedule.to_string() +
                                         " violates n_{k+1} >= 2(n_1+...+n_k) at k=" +
                                         std::to_string(*bad));
  return BlockSchedule(schedule.sizes(), ScheduleKind::General, d);
}

// Non-decreasing effective sizes; a truncated tail smaller than its
// predecessor is folded into it.
BlockSchedule polar_schedule(const BlockSchedule& s) {
  std::vector<std::size_t> e = s.effective_sizes();
  for (std::size_t k = 1; k + 1 < e.size(); ++k)
    if (e[k] < e[k - 1])
      throw Error(ErrorCode::Schedule, "polar form needs non-decreasing block sizes");
  if (e.size() >= 2 && e.back() < e[e.size() - 2]) {
    const bool truncated = e.back() < s.sizes()[e.size() - 1];
    if (!truncated) throw Error(ErrorCode::Schedule, "polar form needs non-decreasing block sizes");
    e[e.size() - 2] += e.back();
    e.pop_back();
  }
  return BlockSchedule(std::move(e), s.kind(), s.extent());
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out(n);
  std::size_t at = 0;
  for (const auto& b : blocks) {
    out.set_block(at, at, b);
    at += b.rows();
  }
  return out;
}

SparsifiedForm adjoint_form(SparsifiedForm form, const OperatorMatrix& t, FormKind kind,
                            const TransformOptions& options) {
  form.input = t;
  form.transformed = adjoint(form.transformed);
  form.kind = kind;
  return finish(std::move(form), options);
}

// Closure of v under t and t^*, orthogonal to `exclude` (itself reducing).
std::vector<Vector> closure_within(const OperatorMatrix& t, const Vector& v,
                                   const std::vector<Vector>& exclude, double tol) {
  std::vector<Vector> all = exclude;
  GsOutcome first = mgs_append(all, v, tol);
  if (!first.accepted()) return {};
  all.push_back(first.vector);
  for (std::size_t i = exclude.size(); i < all.size(); ++i) {
    for (bool adj : {false, true}) {
      const Vector w = adj ? apply_adjoint(t, all[i]) : blocktrid::apply(t, all[i]);
      GsOutcome g = mgs_append(all, w, tol);
      if (g.accepted()) all.push_back(std::move(g.vector));
    }
  }
  return {all.begin() + static_cast<std::ptrdiff_t>(exclude.size()), all.end()};
}

}  // namespace

SparsifiedForm staircase(const OperatorMatrix& t, const TransformOptions& options) {
  require_operator(t, "staircase");
  const std::vector<OperatorMatrix> ops{t};
  BuildResult b = run_program(ops, staircase_program(), t.rows(), build_options(options));
  return finish(from_build(t, std::move(b), FormKind::Staircase), options);
}

SparsifiedForm block_tridiagonalize(const OperatorMatrix& t, const BlockSchedule& schedule,
                                    const TransformOptions& options) {
  require_operator(t, "block_tridiagonalize");
  BlockSchedule s = require_general_schedule(schedule, t.rows());
  SparsifiedForm form = staircase(t, options);
  form.kind = FormKind::BlockTridiag;
  form.schedule = std::move(s);
  return finish(std::move(form), options);
}

SparsifiedForm polar_sparsify_banded(const OperatorMatrix& m, const BlockSchedule& schedule,
                                     const TransformOptions& options) {
  require_operator(m, "polar_sparsify");
  const BlockSchedule s = polar_schedule(BlockSchedule(schedule.sizes(), schedule.kind(), m.rows()));
  if (!check_pattern(m, PatternSpec::block_band(s), options.threshold).empty())
    throw Error(ErrorCode::InvalidArgument, "polar_sparsify: matrix is not block tridiagonal under " +
                                                s.to_string());

  const auto& n = s.effective_sizes();
  std::vector<Matrix> unitaries{Matrix::identity(n[0])};
  for (std::size_t k = 1; k < s.block_count(); ++k) {
    const std::size_t nk = n[k - 1], next = n[k];
    const Matrix a = m.block(s.block_start(k) - 1, s.block_start(k + 1) - 1, nk, next);
    // X = (U_k^* A_k ; 0), square of size n_{k+1}; X^* = U P gives U_{k+1}.
    Matrix x(next);
    x.set_block(0, 0, multiply(adjoint(unitaries.back()), a));
    unitaries.push_back(polar_unitary(adjoint(x)).unitary);
  }
  const Matrix v = block_diagonal(unitaries);

  SparsifiedForm form;
  form.input = m;
  form.basis = v;
  form.transformed = conjugate(m, v);
  form.schedule = s;
  form.kind = FormKind::PolarSparse;
  return finish(std::move(form), options);
}

SparsifiedForm polar_sparsify(const OperatorMatrix& t, const BlockSchedule& schedule,
                              const TransformOptions& options) {
  SparsifiedForm banded = block_tridiagonalize(t, schedule, options);
  SparsifiedForm polar = polar_sparsify_banded(banded.transformed, *banded.schedule, options);
  SparsifiedForm form;
  form.input = t;
  form.basis = multiply(banded.basis, polar.basis);
  form.transformed = std::move(polar.transformed);
  form.schedule = std::move(polar.schedule);
  form.kind = FormKind::PolarSparse;
  form.log = std::move(banded.log);
  return finish(std::move(form), options);
}

SparsifiedForm polar_sparsify_alt(const OperatorMatrix& t, const BlockSchedule& schedule,
                                  const TransformOptions& options) {
  require_operator(t, "polar_sparsify_alt");
  return adjoint_form(polar_sparsify(adjoint(t), schedule, options), t,
                      FormKind::PolarSparseAlt, options);
}

SparsifiedForm tri_sparsify(const OperatorMatrix& t, const TransformOptions& options) {
  require_operator(t, "tri_sparsify");
  const std::vector<OperatorMatrix> ops{t};
  BuildResult b = run_program(ops, t3_program(), t.rows(), build_options(options));
  SparsifiedForm form = from_build(t, std::move(b), FormKind::TriSparse);
  form.schedule = canonical_schedule_for_dim(t.rows(), 1, ScheduleKind::General);
  return finish(std::move(form), options);
}

SparsifiedForm tri_sparsify_alt(const OperatorMatrix& t, const TransformOptions& options) {
  require_operator(t, "tri_sparsify_alt");
  return adjoint_form(tri_sparsify(adjoint(t), options), t, FormKind::TriSparseAlt, options);
}

namespace {

SparsifiedForm cyclic_form(const OperatorMatrix& t, const Vector& v, const WordProgram& program,
                           FormKind kind, const TransformOptions& options) {
  require_operator(t, to_string(kind));
  if (v.size() != t.rows())
    throw Error(ErrorCode::DimensionMismatch, "start vector length differs from the operator dimension");
  if (norm(v) == 0.0) throw Error(ErrorCode::InvalidArgument, "start vector is zero");
  const std::vector<OperatorMatrix> ops{t};
  BuildOptions bo = build_options(options);
  bo.start_vector = v;
  return finish(from_build(t, run_program(ops, program, t.rows(), bo), kind), options);
}

}  // namespace

SparsifiedForm krylov_hessenberg(const OperatorMatrix& t, const Vector& v,
                                 const TransformOptions& options) {
  return cyclic_form(t, v, krylov_program(), FormKind::Hessenberg, options);
}

SparsifiedForm joint_cyclic_staircase(const OperatorMatrix& t, const Vector& v,
                                      const TransformOptions& options) {
  return cyclic_form(t, v, joint_cyclic_program(), FormKind::JointCyclic, options);
}

FamilyForm family_staircase(std::span<const OperatorMatrix> ops, bool selfadjoint,
                            const TransformOptions& options) {
  if (ops.empty()) throw Error(ErrorCode::InvalidArgument, "family_staircase: empty family");
  const std::size_t d = ops.front().rows();
  for (const auto& s : ops) {
    require_operator(s, "family_staircase");
    if (s.rows() != d) throw Error(ErrorCode::DimensionMismatch, "family_staircase: operators differ in dimension");
    if (selfadjoint && hermitian_residual(s) > 1e-8)
      throw Error(ErrorCode::InvalidArgument, "family_staircase: operator is not selfadjoint");
  }
  const WordProgram program = family_program(ops.size(), selfadjoint);
  BuildResult b = run_program(ops, program, d, build_options(options));

  FamilyForm out;
  out.basis = std::move(b.basis);
  out.log = std::move(b.log);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    SparsifiedForm m;
    m.input = ops[k];
    m.basis = out.basis;
    m.transformed = conjugate(ops[k], out.basis);
    m.kind = FormKind::Family;
    m.family_index = k + 1;
    m.family_stride = program.stride();
    out.members.push_back(finish(std::move(m), options));
  }
  return out;
}

bool FamilyForm::passing() const {
  return std::all_of(members.begin(), members.end(),
                     [](const SparsifiedForm& m) { return m.report.passing(); });
}

Matrix reducing_closure(const OperatorMatrix& t, const Vector& v, double tol) {
  require_operator(t, "reducing_closure");
  if (v.size() != t.rows())
    throw Error(ErrorCode::DimensionMismatch, "reducing_closure: vector length mismatch");
  if (norm(v) == 0.0) throw Error(ErrorCode::InvalidArgument, "reducing_closure: zero vector");
  return Matrix::from_columns(closure_within(t, v, {}, tol));
}

Decomposition decompose(const OperatorMatrix& t, const TransformOptions& options) {
  require_operator(t, "decompose");
  const std::size_t d = t.rows();
  std::vector<Vector> captured;
  Decomposition out;
  std::vector<std::size_t> segments;

  for (std::size_t k = 0; k < d && captured.size() < d; ++k) {
    GsOutcome seed = mgs_append(captured, unit_vector(d, k), options.dependence_tol);
    if (!seed.accepted()) continue;
    const std::vector<Vector> q_cols = closure_within(t, seed.vector, captured, options.dependence_tol);
    const Matrix q = Matrix::from_columns(q_cols);
    const Matrix restricted = multiply(adjoint(q), multiply(t, q));
    const Vector v_local = apply_adjoint(q, seed.vector);

    SparsifiedForm summand = joint_cyclic_staircase(restricted, v_local, options);
    summand.kind = FormKind::DirectSummand;
    summand.schedule = canonical_schedule_for_dim(q.cols(), 1, ScheduleKind::Cyclic);
    summand.report = full_report(summand, options.threshold);

    const Matrix global = multiply(q, summand.basis);
    for (std::size_t j = 0; j < global.cols(); ++j) captured.push_back(global.column(j));
    segments.insert(segments.end(), summand.segments.begin(), summand.segments.end());
    out.summands.push_back(std::move(summand));
  }
  if (captured.size() != d)
    throw Error(ErrorCode::Numeric, "decompose: summands span " + std::to_string(captured.size()) +
                                        " of " + std::to_string(d) + " dimensions");

  SparsifiedForm whole;
  whole.input = t;
  whole.basis = Matrix::from_columns(captured);
  whole.transformed = conjugate(t, whole.basis);
  whole.kind = FormKind::DirectSum;
  whole.segments = std::move(segments);
  out.whole = finish(std::move(whole), options);
  return out;
}

bool Decomposition::passing() const {
  return whole.report.passing() &&
         std::all_of(summands.begin(), summands.end(),
                     [](const SparsifiedForm& s) { return s.report.passing(); });
}

}  // namespace blocktrid
