#include "basisbuild.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace blocktrid {

std::size_t default_instruction_cap(std::size_t dim) {
  std::size_t p = 1;
  while (p < dim) p *= 3;  // 3^ceil(log3 d)
  return 10 * p + 3 * dim;
}

BuildResult run_program(std::span<const OperatorMatrix> ops, const WordProgram& program,
                        std::size_t dim, const BuildOptions& options) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "run_program: dim must be positive");
  if (ops.size() != program.family_size())
    throw Error(ErrorCode::InvalidArgument, "run_program: operator count differs from family size");
  for (const auto& op : ops)
    if (op.rows() != dim || op.cols() != dim)
      throw Error(ErrorCode::DimensionMismatch, "run_program: operator is not dim x dim");
  if (program.is_cyclic()) {
    if (options.start_vector.size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "run_program: start vector length differs from dim");
    if (norm(options.start_vector) == 0.0)
      throw Error(ErrorCode::InvalidArgument, "run_program: start vector is zero");
  }

  const std::size_t cap = options.instruction_cap.value_or(default_instruction_cap(dim));
  const bool raw_style = program.style() == SourceStyle::Raw;

  ProgramCursor cursor(program);
  std::vector<Vector> accepted;
  std::vector<Vector> raw;
  BuildResult result;
  result.segments.push_back(0);

  while (accepted.size() < dim) {
    if (cursor.emitted() >= cap)
      throw Error(ErrorCode::Internal, "run_program: instruction cap " + std::to_string(cap) +
                                           " reached with " + std::to_string(accepted.size()) +
                                           " of " + std::to_string(dim) + " vectors");

    std::optional<Emission> emission = cursor.next();
    if (!emission) {
      // Cyclic segment exhausted: its span is invariant. Pad with the first
      // standard basis vector outside it.
      std::size_t k = 0;
      for (std::size_t j = 0; j < dim && k == 0; ++j)
        if (mgs_append(accepted, unit_vector(dim, j), options.tol).accepted()) k = j + 1;
      if (k == 0) throw Error(ErrorCode::Numeric, "run_program: no standard vector extends the basis");
      cursor.restart_segment(k);
      result.segments.push_back(0);
      continue;
    }

    Vector candidate;
    if (const auto* seed = std::get_if<Seed>(&emission->instruction)) {
      if (seed->k == 0)
        candidate = options.start_vector;
      else if (seed->k <= dim)
        candidate = unit_vector(dim, seed->k - 1);
    } else {
      const auto& a = std::get<Apply>(emission->instruction);
      const Vector& source = raw_style ? raw.at(a.src - 1) : accepted.at(a.src - 1);
      const OperatorMatrix& op = ops[a.op - 1];
      candidate = a.adjoint ? apply_adjoint(op, source) : blocktrid::apply(op, source);
    }

    LogEntry entry{emission->position, emission->instruction, false, 0.0, 0,
                   result.segments.size()};
    GsOutcome outcome;
    if (!candidate.empty()) outcome = mgs_append(accepted, candidate, options.tol);
    entry.residual_norm = outcome.residual_norm;
    if (outcome.accepted()) {
      accepted.push_back(std::move(outcome.vector));
      if (raw_style) raw.push_back(std::move(candidate));
      entry.accepted = true;
      entry.basis_index = accepted.size();
      ++result.segments.back();
    } else {
      renumber_after_deletion(cursor, emission->position);
    }
    result.log.push_back(std::move(entry));
  }

  result.basis = Matrix::from_columns(accepted);
  return result;
}

OperatorMatrix conjugate(const OperatorMatrix& t, const BasisChange& u) {
  if (!t.is_square() || !u.is_square() || t.rows() != u.rows())
    throw Error(ErrorCode::DimensionMismatch, "conjugate: dimension mismatch");
  if (unitarity_residual(u) > 1e-8)
    throw Error(ErrorCode::InvalidArgument, "conjugate: basis change is not unitary");
  return multiply(adjoint(u), multiply(t, u));
}

double span_residual(std::size_t n, const BasisChange& u, std::size_t m) {
  const std::size_t d = u.rows();
  if (n == 0 || n > d) throw Error(ErrorCode::InvalidArgument, "span_residual: n out of range");
  Vector r = unit_vector(d, n - 1);
  const std::size_t cols = std::min(m, u.cols());
  for (std::size_t k = 0; k < cols; ++k) {
    const Complex c = std::conj(u(n - 1, k));  // <f_k, e_n>
    for (std::size_t i = 0; i < d; ++i) r[i] -= c * u(i, k);
  }
  return norm(r);
}

nlohmann::json log_to_json(std::span<const LogEntry> log) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : log) {
    nlohmann::json j;
    if (e.position <= std::numeric_limits<std::uint64_t>::max())
      j["position"] = e.position.convert_to<std::uint64_t>();
    else
      j["position"] = e.position.str();
    j["instruction"] = to_trace_line(e.instruction);
    j["accepted"] = e.accepted;
    j["residual_norm"] = e.residual_norm;
    if (e.accepted) j["basis_index"] = e.basis_index;
    j["segment"] = e.segment;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace blocktrid
