#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "form.hpp"

namespace blocktrid {

const char* to_string(FormKind kind) {
  switch (kind) {
    case FormKind::Staircase: return "staircase";
    case FormKind::BlockTridiag: return "block-tridiagonal";
    case FormKind::PolarSparse: return "polar";
    case FormKind::PolarSparseAlt: return "polar-alt";
    case FormKind::TriSparse: return "triangular";
    case FormKind::TriSparseAlt: return "triangular-alt";
    case FormKind::Hessenberg: return "hessenberg";
    case FormKind::JointCyclic: return "joint-cyclic";
    case FormKind::Family: return "family";
    case FormKind::DirectSummand: return "direct-summand";
    case FormKind::DirectSum: return "direct-sum";
  }
  return "unknown";
}

PatternSpec PatternSpec::family_stride(std::size_t s) {
  if (s == 0) throw Error(ErrorCode::InvalidArgument, "family stride must be positive");
  PatternSpec p;
  p.kind = PatternKind::FamilyStride;
  p.stride = s;
  return p;
}

PatternSpec PatternSpec::block_band(BlockSchedule s) {
  PatternSpec p;
  p.kind = PatternKind::BlockBand;
  p.schedule = std::move(s);
  return p;
}

PatternSpec PatternSpec::polar_blocks(BlockSchedule s, bool transposed) {
  PatternSpec p;
  p.kind = PatternKind::PolarBlocks;
  p.schedule = std::move(s);
  p.transposed = transposed;
  return p;
}

PatternSpec PatternSpec::tri_blocks(BlockSchedule s, bool transposed) {
  PatternSpec p;
  p.kind = PatternKind::TriBlocks;
  p.schedule = std::move(s);
  p.transposed = transposed;
  return p;
}

bool PatternSpec::allowed(std::size_t i, std::size_t j) const {
  if (!segments.empty()) {
    auto locate = [&](std::size_t x) -> std::pair<std::size_t, std::size_t> {
      std::size_t start = 0;
      for (std::size_t s = 0; s < segments.size(); ++s) {
        if (x > start && x <= start + segments[s]) return {s, x - start};
        start += segments[s];
      }
      throw Error(ErrorCode::InvalidArgument, "pattern index outside the segments");
    };
    const auto [seg_i, local_i] = locate(i);
    const auto [seg_j, local_j] = locate(j);
    if (seg_i != seg_j) return false;
    i = local_i;
    j = local_j;
  }
  if (transposed) std::swap(i, j);

  switch (kind) {
    case PatternKind::StaircaseCoarse: return j <= 3 * i && i <= 3 * j;
    case PatternKind::StaircaseRefined: return j <= 3 * i && i + 1 <= 3 * j;
    case PatternKind::JointCyclic: return i <= 2 * j && j <= 2 * i + 1;
    case PatternKind::Hessenberg: return i <= j + 1;
    case PatternKind::FamilyStride: return j <= stride * i && i <= stride * j;
    case PatternKind::BlockBand:
    case PatternKind::PolarBlocks:
    case PatternKind::TriBlocks: {
      const BlockSchedule& s = *schedule;
      const std::size_t bi = block_of(i, s), bj = block_of(j, s);
      if ((bi > bj ? bi - bj : bj - bi) > 1) return false;
      if (kind == PatternKind::BlockBand || bi == bj) return true;
      const std::size_t li = i - s.block_start(bi) + 1;
      const std::size_t lj = j - s.block_start(bj) + 1;
      const std::size_t ni = s.effective_sizes()[bi - 1];
      if (kind == PatternKind::PolarBlocks) return bj == bi + 1 ? lj <= ni : true;
      if (bi == bj + 1) return li <= lj;  // B_k = (B'_k | 0)^T, B'_k upper
      return lj <= ni + li;               // A_k = (A'_k | A''_k | 0), A''_k lower
    }
  }
  return false;
}

std::string PatternSpec::name() const {
  std::string base;
  switch (kind) {
    case PatternKind::StaircaseCoarse: base = "staircase"; break;
    case PatternKind::StaircaseRefined: base = "staircase-refined"; break;
    case PatternKind::JointCyclic: base = "jointcyclic"; break;
    case PatternKind::Hessenberg: base = "hessenberg"; break;
    case PatternKind::FamilyStride: base = "family:" + std::to_string(stride); break;
    case PatternKind::BlockBand: base = "band"; break;
    case PatternKind::PolarBlocks: base = "polar"; break;
    case PatternKind::TriBlocks: base = "tri"; break;
  }
  if (transposed) base += "-alt";
  return base;
}

PatternSpec parse_pattern(std::string_view name, const std::optional<BlockSchedule>& schedule) {
  auto need_schedule = [&]() -> BlockSchedule {
    if (!schedule)
      throw Error(ErrorCode::InvalidArgument, "pattern '" + std::string(name) + "' needs a schedule");
    return *schedule;
  };
  if (name == "staircase") return PatternSpec::staircase_coarse();
  if (name == "staircase-refined") return PatternSpec::staircase_refined();
  if (name == "jointcyclic") return PatternSpec::joint_cyclic();
  if (name == "hessenberg") return PatternSpec::hessenberg();
  if (name == "band") return PatternSpec::block_band(need_schedule());
  if (name == "polar") return PatternSpec::polar_blocks(need_schedule(), false);
  if (name == "polar-alt") return PatternSpec::polar_blocks(need_schedule(), true);
  if (name == "tri") return PatternSpec::tri_blocks(need_schedule(), false);
  if (name == "tri-alt") return PatternSpec::tri_blocks(need_schedule(), true);
  if (name.starts_with("family:")) {
    const std::string digits(name.substr(7));
    std::size_t used = 0;
    unsigned long s = 0;
    try {
      s = std::stoul(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size() || s == 0)
      throw Error(ErrorCode::InvalidArgument, "bad family stride in '" + std::string(name) + "'");
    return PatternSpec::family_stride(s);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown pattern '" + std::string(name) + "'");
}

std::vector<Violation> check_pattern(const Matrix& m, const PatternSpec& pattern, double threshold) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "check_pattern: matrix not square");
  if (pattern.schedule && pattern.schedule->extent() < m.rows())
    throw Error(ErrorCode::Schedule, "check_pattern: schedule does not reach the matrix dimension");
  if (!pattern.segments.empty() &&
      std::accumulate(pattern.segments.begin(), pattern.segments.end(), std::size_t{0}) != m.rows())
    throw Error(ErrorCode::InvalidArgument, "check_pattern: segments do not sum to the dimension");

  std::vector<Violation> out;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double mag = std::abs(m(i, j));
      if (mag > threshold && !pattern.allowed(i + 1, j + 1)) out.push_back({i + 1, j + 1, mag});
    }
  return out;
}

namespace {

// Off-diagonal block k of a band matrix in "A" orientation: rows of block k,
// columns of block k+1. Transposed patterns read the adjoint instead.
struct OffDiagonal {
  std::size_t k;
  Matrix a;
};

std::vector<OffDiagonal> upper_blocks(const Matrix& m, const BlockSchedule& s) {
  std::vector<OffDiagonal> out;
  const auto& n = s.effective_sizes();
  for (std::size_t k = 1; k < s.block_count(); ++k)
    out.push_back({k, m.block(s.block_start(k) - 1, s.block_start(k + 1) - 1, n[k - 1], n[k])});
  return out;
}

std::vector<OffDiagonal> lower_blocks(const Matrix& m, const BlockSchedule& s) {
  std::vector<OffDiagonal> out;
  const auto& n = s.effective_sizes();
  for (std::size_t k = 1; k < s.block_count(); ++k)
    out.push_back({k, m.block(s.block_start(k + 1) - 1, s.block_start(k) - 1, n[k], n[k - 1])});
  return out;
}

void polar_measures(const Matrix& m, const PatternSpec& pattern, VerificationReport& r) {
  const Matrix& oriented = pattern.transposed ? adjoint(m) : m;
  for (const auto& [k, a] : upper_blocks(oriented, *pattern.schedule)) {
    const std::size_t h = a.rows();
    const std::size_t w = std::min(a.rows(), a.cols());
    const Matrix p = a.block(0, 0, h, w);
    double tail = 0.0;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = w; j < a.cols(); ++j) tail = std::max(tail, std::abs(a(i, j)));
    r.tail_residuals.push_back({k, tail});
    if (h != w) continue;  // only a truncated final block can be tall
    r.hermitian_residuals.push_back({k, hermitian_residual(p)});
    Matrix sym(h);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) sym(i, j) = 0.5 * (p(i, j) + std::conj(p(j, i)));
    const auto eig = hermitian_eigvals(sym);
    r.psd_min_eig.push_back({k, eig.empty() ? 0.0 : eig.front()});
    r.psd_bound.push_back({k, -kPsdTol * std::max(1.0, max_abs(p))});
  }
}

void triangular_measures(const Matrix& m, const PatternSpec& pattern, VerificationReport& r) {
  const Matrix& oriented = pattern.transposed ? adjoint(m) : m;
  for (const auto& [k, b] : lower_blocks(oriented, *pattern.schedule)) {
    double v = 0.0;  // B'_k below its diagonal and the zero tail
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (i > j) v = std::max(v, std::abs(b(i, j)));
    r.lower_triangular_residuals.push_back({k, v});
  }
  for (const auto& [k, a] : upper_blocks(oriented, *pattern.schedule)) {
    const std::size_t nk = a.rows();
    double v = 0.0;  // A''_k above its diagonal and the zero tail
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (j > nk + i) v = std::max(v, std::abs(a(i, j)));
    r.upper_triangular_residuals.push_back({k, v});
  }
}

void block_measures(const Matrix& m, const PatternSpec& pattern, VerificationReport& r) {
  if (pattern.kind == PatternKind::PolarBlocks) polar_measures(m, pattern, r);
  if (pattern.kind == PatternKind::TriBlocks) triangular_measures(m, pattern, r);
}

std::size_t pow3_capped(std::size_t e, std::size_t cap) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < e && p < cap; ++i) p *= 3;
  return std::min(p, cap);
}

std::vector<SpanCheck> span_checks(const SparsifiedForm& form) {
  const std::size_t d = form.basis.rows();
  std::vector<SpanCheck> out;
  auto add = [&](std::size_t n, std::size_t bound) {
    bound = std::min(bound, d);
    out.push_back({n, bound, span_residual(n, form.basis, bound)});
  };
  switch (form.kind) {
    case FormKind::Staircase:
    case FormKind::BlockTridiag:
      add(1, 1);
      for (std::size_t n = 1; n <= d; ++n) add(n, 3 * n);
      break;
    case FormKind::PolarSparse:
    case FormKind::PolarSparseAlt: {
      add(1, 1);
      const BlockSchedule& s = *form.schedule;
      for (std::size_t n = 1; n <= d; ++n) {
        const std::size_t idx = std::min(3 * n, d);
        add(n, s.partial_sums()[block_of(idx, s) - 1]);
      }
      break;
    }
    case FormKind::TriSparse:
    case FormKind::TriSparseAlt:
      add(1, 1);
      for (std::size_t n = 1; n <= d; ++n) add(n, pow3_capped(n, d));
      break;
    case FormKind::Family:
      add(1, 1);
      for (std::size_t n = 1; n <= d; ++n) add(n, 1 + (n - 1) * form.family_stride);
      break;
    default:
      break;
  }
  return out;
}

nlohmann::json measures_json(const std::vector<BlockMeasure>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : v) out.push_back({{"block", m.block}, {"value", m.value}});
  return out;
}

}  // namespace

PatternSpec pattern_for(const SparsifiedForm& form) {
  PatternSpec pattern;
  switch (form.kind) {
    case FormKind::Staircase: pattern = PatternSpec::staircase_refined(); break;
    case FormKind::BlockTridiag: pattern = PatternSpec::block_band(*form.schedule); break;
    case FormKind::PolarSparse: pattern = PatternSpec::polar_blocks(*form.schedule, false); break;
    case FormKind::PolarSparseAlt: pattern = PatternSpec::polar_blocks(*form.schedule, true); break;
    case FormKind::TriSparse: pattern = PatternSpec::tri_blocks(*form.schedule, false); break;
    case FormKind::TriSparseAlt: pattern = PatternSpec::tri_blocks(*form.schedule, true); break;
    case FormKind::Hessenberg: pattern = PatternSpec::hessenberg(); break;
    case FormKind::JointCyclic:
    case FormKind::DirectSummand:
    case FormKind::DirectSum:
      pattern = PatternSpec::joint_cyclic();
      pattern.segments = form.segments;
      break;
    case FormKind::Family: pattern = PatternSpec::family_stride(form.family_stride); break;
  }
  return pattern;
}

VerificationReport pattern_report(const Matrix& m, const PatternSpec& pattern, double threshold) {
  VerificationReport r;
  r.form = "matrix";
  r.pattern = pattern.name();
  r.threshold = threshold;
  r.pattern_violations = check_pattern(m, pattern, threshold);
  block_measures(m, pattern, r);
  r.segments = pattern.segments;
  return r;
}

VerificationReport full_report(const SparsifiedForm& form, double threshold) {
  const PatternSpec pattern = pattern_for(form);
  VerificationReport r = pattern_report(form.transformed, pattern, threshold);
  r.form = to_string(form.kind);

  const Matrix& t = form.input;
  r.unitarity_residual = unitarity_residual(form.basis);
  r.reconstruction_residual =
      max_abs(subtract(multiply(form.basis, multiply(form.transformed, adjoint(form.basis))), t));
  r.reconstruction_bound = kReconstructionRelTol * (1.0 + max_abs(t));
  r.span_residuals = span_checks(form);

  const double opnorm = t.rows() == 0 ? 0.0 : svd(t).sigma.front();
  Matrix tp = t, mp = form.transformed;
  for (std::size_t p = 0; p < 3; ++p) {
    if (p > 0) {
      tp = multiply(tp, t);
      mp = multiply(mp, form.transformed);
    }
    r.trace_deviation[p] = std::abs(trace(mp) - trace(tp));
    r.trace_bound[p] = kTraceRelTol * std::pow(opnorm, static_cast<double>(p + 1));
  }
  const double tf = frobenius_norm(t);
  r.frobenius_deviation = std::abs(frobenius_norm(form.transformed) - tf);
  r.frobenius_bound = kFrobeniusRelTol * tf;

  if (form.kind == FormKind::DirectSum) {
    double coupling = 0.0;
    std::size_t start = 0;
    for (std::size_t len : form.segments) {
      for (std::size_t i = start; i < start + len; ++i)
        for (std::size_t j = 0; j < form.transformed.cols(); ++j)
          if (j < start || j >= start + len)
            coupling = std::max(coupling, std::abs(form.transformed(i, j)));
      start += len;
    }
    r.coupling = coupling;
  }
  return r;
}

bool VerificationReport::passing() const {
  if (unitarity_residual > kUnitarityTol) return false;
  if (reconstruction_residual > reconstruction_bound) return false;
  if (!pattern_violations.empty()) return false;
  for (std::size_t i = 0; i < psd_min_eig.size(); ++i)
    if (psd_min_eig[i].value < psd_bound[i].value) return false;
  for (const auto& h : hermitian_residuals)
    if (h.value > kHermitianTol) return false;
  for (const auto* group : {&tail_residuals, &lower_triangular_residuals, &upper_triangular_residuals})
    for (const auto& m : *group)
      if (m.value > threshold) return false;
  for (const auto& s : span_residuals)
    if (s.residual > kSpanTol) return false;
  for (std::size_t p = 0; p < 3; ++p)
    if (trace_deviation[p] > trace_bound[p]) return false;
  if (frobenius_deviation > frobenius_bound) return false;
  if (coupling && *coupling > kCouplingTol) return false;
  return true;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["passing"] = passing();
  j["form"] = form;
  j["pattern"] = {{"name", pattern}, {"threshold", threshold}, {"violation_count", pattern_violations.size()}};
  nlohmann::json viol = nlohmann::json::array();
  for (const auto& v : pattern_violations) viol.push_back({{"i", v.i}, {"j", v.j}, {"magnitude", v.magnitude}});
  j["pattern"]["violations"] = std::move(viol);
  j["unitarity"] = {{"residual", unitarity_residual}, {"bound", kUnitarityTol}};
  j["reconstruction"] = {{"residual", reconstruction_residual}, {"bound", reconstruction_bound}};
  if (!psd_min_eig.empty() || !tail_residuals.empty()) {
    j["polar"] = {{"psd_min_eig", measures_json(psd_min_eig)},
                  {"psd_bound", measures_json(psd_bound)},
                  {"hermitian_residuals", measures_json(hermitian_residuals)},
                  {"tail_residuals", measures_json(tail_residuals)}};
  }
  if (!lower_triangular_residuals.empty() || !upper_triangular_residuals.empty()) {
    j["triangular"] = {{"lower_block_residuals", measures_json(lower_triangular_residuals)},
                       {"upper_block_residuals", measures_json(upper_triangular_residuals)}};
  }
  nlohmann::json spans = nlohmann::json::array();
  for (const auto& s : span_residuals) spans.push_back({{"n", s.n}, {"bound", s.bound}, {"residual", s.residual}});
  j["span"] = {{"checks", std::move(spans)}, {"tolerance", kSpanTol}};
  j["invariants"] = {{"trace_deviation", trace_deviation},
                     {"trace_bound", trace_bound},
                     {"frobenius_deviation", frobenius_deviation},
                     {"frobenius_bound", frobenius_bound}};
  if (!segments.empty()) j["segments"] = segments;
  if (coupling) j["coupling"] = {{"max", *coupling}, {"bound", kCouplingTol}};
  return j;
}

}  // namespace blocktrid
