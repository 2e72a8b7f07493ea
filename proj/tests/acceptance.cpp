// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "basisbuild.hpp"
#include "matrix_io.hpp"
#include "oracles.hpp"
#include "schedule.hpp"
#include "support.hpp"
#include "transforms.hpp"
#include "wordgen.hpp"

#ifndef BLOCKTRID_FIXTURE_DIR
#error "BLOCKTRID_FIXTURE_DIR must be defined"
#endif
#ifndef BLOCKTRID_CLI_PATH
#error "BLOCKTRID_CLI_PATH must be defined"
#endif

namespace {

using namespace blocktrid;
using Sizes = std::vector<std::size_t>;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// Collects failure messages; keeps only the first few for the summary line.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.size() < 3) first_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(checks_) + " checks";
    if (failures_) {
      s += ", " + std::to_string(failures_) + " failed:";
      for (const auto& f : first_) s += " [" + f + "]";
    }
    return s;
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::vector<std::string> first_;
};

// (T, M) pairs gathered from every suite for the similarity-invariant criterion.
struct InvariantCase {
  std::string label;
  Matrix t, m;
};
std::vector<InvariantCase> g_invariants;

void record(const std::string& label, const SparsifiedForm& f) { g_invariants.push_back({label, f.input, f.transformed}); }

// Largest |M(i, j)| over the index pairs where `zero(i, j)` holds (1-based).
double max_where(const Matrix& m, const std::function<bool(std::size_t, std::size_t)>& zero) {
  double worst = 0.0;
  for (std::size_t i = 1; i <= m.rows(); ++i)
    for (std::size_t j = 1; j <= m.cols(); ++j)
      if (zero(i, j)) worst = std::max(worst, std::abs(m(i - 1, j - 1)));
  return worst;
}

// Segment of a 1-based index, for block-diagonal splits of cyclic forms.
std::size_t segment_of(std::size_t i, const Sizes& segments) { return oracle::block_index(i, segments); }

std::size_t segment_start(std::size_t seg, const Sizes& segments) {
  std::size_t s = 1;
  for (std::size_t q = 1; q < seg; ++q) s += segments[q - 1];
  return s;
}

double unitarity(const Matrix& u) {
  Matrix g = multiply(adjoint(u), u);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double reconstruction_rel(const SparsifiedForm& f) {
  const Matrix back = multiply(f.basis, multiply(f.transformed, adjoint(f.basis)));
  return testing::max_entry_diff(back, f.input) / std::max(1.0, max_abs(f.input));
}

// Distance from e_n to the span of the first m columns of u.
double span_residual_oracle(std::size_t n, const Matrix& u, std::size_t m) {
  const std::size_t d = u.rows(), cols = std::min(m, u.cols());
  Vector r(d);
  r[n - 1] = 1.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const Complex coeff = std::conj(u(n - 1, c));
    for (std::size_t i = 0; i < d; ++i) r[i] -= coeff * u(i, c);
  }
  double s = 0.0;
  for (const Complex& z : r) s += std::norm(z);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

std::string criterion1(Tally& t) {
  const double r2 = std::sqrt(2.0);
  const Matrix tm(5, 5, {1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1});
  Matrix u(5, 5, {0, 0, r2, 0, 0, 0, 1, 0, -1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, -1});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) u(i, j) /= r2;
  Matrix expected(5, 5, {4, 4, 0, 0, 0, 4, 4, r2, 0, 0, 0, 2 * r2, 2, 0, 0, 0, 0, -r2, 0, 0, 0, 0, 0, 0, 0});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) expected(i, j) /= 2.0;

  const auto t0 = Clock::now();
  const Matrix m = conjugate(tm, u);
  const double elapsed = ms_since(t0);
  const double err = testing::max_entry_diff(m, expected);
  t.check(err <= 1e-12, "entrywise error " + sci(err));
  t.check(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " ms");
  return "max error " + sci(err) + ", " + std::to_string(elapsed) + " ms";
}

std::string criterion2(Tally& t) {
  const auto t0 = Clock::now();
  double worst_u = 0, worst_r = 0, worst_s = 0;
  std::size_t violations = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const std::size_t d = 1 + k % 40;
    const Matrix tm = testing::random_matrix(d, 2000 + k);
    const SparsifiedForm f = staircase(tm);
    const double v = max_where(f.transformed, [](std::size_t i, std::size_t j) { return !(j <= 3 * i && i + 1 <= 3 * j); });
    if (v > 1e-10) ++violations;
    worst_u = std::max(worst_u, unitarity(f.basis));
    worst_r = std::max(worst_r, reconstruction_rel(f));
    for (std::size_t n = 1; n <= d; ++n) worst_s = std::max(worst_s, span_residual_oracle(n, f.basis, 3 * n));
    record("staircase d=" + std::to_string(d), f);
  }
  const double elapsed = ms_since(t0) / 1000.0;
  t.check(violations == 0, std::to_string(violations) + " matrices with pattern violations");
  t.check(worst_u <= 1e-10, "unitarity " + sci(worst_u));
  t.check(worst_r <= 1e-8, "reconstruction " + sci(worst_r));
  t.check(worst_s <= 1e-8, "span residual " + sci(worst_s));
  t.check(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  return "unitarity " + sci(worst_u) + ", reconstruction " + sci(worst_r) + ", span " + sci(worst_s) + ", " +
         std::to_string(elapsed) + " s";
}

std::string criterion3(Tally& t) {
  auto coarse = [](std::size_t i, std::size_t j) { return j <= 3 * i && i <= 3 * j; };
  auto check_schedule = [&](const Sizes& sizes, const std::string& label) {
    const BlockSchedule s(sizes, ScheduleKind::General, 81);
    std::size_t uncovered = 0, disagreements = 0;
    for (std::size_t i = 1; i <= 81; ++i)
      for (std::size_t j = 1; j <= 81; ++j) {
        const auto bi = oracle::block_index(i, sizes), bj = oracle::block_index(j, sizes);
        const bool band = (bi > bj ? bi - bj : bj - bi) <= 1;
        if (band != covers(i, j, s)) ++disagreements;
        if (coarse(i, j) && !band) ++uncovered;
      }
    t.check(uncovered == 0, label + ": " + std::to_string(uncovered) + " staircase entries outside the band");
    t.check(disagreements == 0, label + ": covers disagrees with brute force " + std::to_string(disagreements) + "x");
  };
  check_schedule(canonical_schedule(5, 1, ScheduleKind::General).sizes(), "canonical");
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Sizes sizes = testing::random_general_sizes(3000 + seed, 81);
    t.check(!validate(sizes, ScheduleKind::General), "random schedule invalid");
    check_schedule(sizes, "random " + std::to_string(seed));
  }
  const bool c1 = covers(4, 27, BlockSchedule({1, 2, 6, 18}, ScheduleKind::General));
  const bool c2 = covers(4, 27, BlockSchedule({4, 8, 24, 72}, ScheduleKind::General));
  const bool c3 = covers(4, 27, BlockSchedule({1, 3, 8, 24}, ScheduleKind::General));
  t.check(c1, "covers(4,27) should hold for [1,2,6,18]");
  t.check(!c2, "covers(4,27) should fail for [4,8,24,72]");
  t.check(!c3, "covers(4,27) should fail for [1,3,8,24]");
  return "canonical + 100 random schedules, counterexamples " + std::string(c1 && !c2 && !c3 ? "reproduced" : "wrong");
}

struct PolarStats {
  double herm = 0, eig = 0, tail = 0, band = 0;
};

// Checks (P'_k | 0) blocks on the upper diagonal of m.
void polar_blocks(const Matrix& m, const Sizes& n, PolarStats& st) {
  std::size_t r0 = 0;
  for (std::size_t k = 1; k < n.size(); ++k) {
    const std::size_t c0 = r0 + n[k - 1];
    const Matrix p = m.block(r0, c0, n[k - 1], n[k - 1]);
    double h = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) h = std::max(h, std::abs(p(i, j) - std::conj(p(j, i))));
    st.herm = std::max(st.herm, h);
    st.eig = std::min(st.eig, oracle::hermitian_eigvals(p).front());
    for (std::size_t i = 0; i < n[k - 1]; ++i)
      for (std::size_t j = n[k - 1]; j < n[k]; ++j) st.tail = std::max(st.tail, std::abs(m(r0 + i, c0 + j)));
    r0 = c0;
  }
  st.band = std::max(st.band, max_where(m, [&](std::size_t i, std::size_t j) {
    const auto bi = oracle::block_index(i, n), bj = oracle::block_index(j, n);
    return (bi > bj ? bi - bj : bj - bi) > 1;
  }));
}

std::string criterion4(Tally& t) {
  PolarStats primary, alt;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::size_t d = 1 + k % 27;
    const Matrix tm = testing::random_matrix(d, 4000 + k);
    const BlockSchedule sched = canonical_schedule_for_dim(d, 1, ScheduleKind::General);
    const SparsifiedForm f = polar_sparsify(tm, sched);
    polar_blocks(f.transformed, f.schedule->effective_sizes(), primary);
    t.check(unitarity(f.basis) <= 1e-10 && reconstruction_rel(f) <= 1e-8, "similarity d=" + std::to_string(d));
    record("polar d=" + std::to_string(d), f);
    const SparsifiedForm g = polar_sparsify_alt(tm, sched);
    polar_blocks(adjoint(g.transformed), g.schedule->effective_sizes(), alt);
    t.check(unitarity(g.basis) <= 1e-10 && reconstruction_rel(g) <= 1e-8, "alt similarity d=" + std::to_string(d));
    record("polar-alt d=" + std::to_string(d), g);
  }
  for (const auto* st : {&primary, &alt}) {
    const std::string which = st == &primary ? "primary" : "alt";
    t.check(st->herm <= 1e-9, which + " hermitian residual " + sci(st->herm));
    t.check(st->eig >= -1e-8, which + " min eigenvalue " + sci(st->eig));
    t.check(st->tail <= 1e-10, which + " trailing block " + sci(st->tail));
    t.check(st->band <= 1e-10, which + " outside band " + sci(st->band));
  }
  return "hermitian " + sci(std::max(primary.herm, alt.herm)) + ", min eig " + sci(std::min(primary.eig, alt.eig)) +
         ", tail " + sci(std::max(primary.tail, alt.tail)) + ", band " + sci(std::max(primary.band, alt.band));
}

std::string criterion5(Tally& t) {
  std::ifstream in(std::string(BLOCKTRID_FIXTURE_DIR) + "/t3_prefix27.trace");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto expected = parse_trace(ss.str());
  const auto actual = t3_sequence(27);
  t.check(expected.size() == 27 && actual == expected, "27-instruction prefix differs from the fixture");

  double lower = 0, upper = 0, span = 0;
  const Sizes n{1, 2, 6, 18};
  for (std::uint64_t k = 0; k < 100; ++k) {
    const SparsifiedForm f = tri_sparsify(testing::random_matrix(27, 5000 + k));
    const Matrix& m = f.transformed;
    std::size_t r0 = 0;
    for (std::size_t b = 1; b < n.size(); ++b) {
      const std::size_t c0 = r0 + n[b - 1];
      for (std::size_t i = 0; i < n[b]; ++i)
        for (std::size_t j = 0; j < n[b - 1]; ++j)
          if (i > j) upper = std::max(upper, std::abs(m(c0 + i, r0 + j)));
      for (std::size_t i = 0; i < n[b - 1]; ++i)
        for (std::size_t j = 0; j < n[b]; ++j)
          if (j > n[b - 1] + i) lower = std::max(lower, std::abs(m(r0 + i, c0 + j)));
      r0 = c0;
    }
    for (std::size_t e = 1; e <= 3; ++e) {
      std::size_t bound = 1;
      for (std::size_t q = 0; q < e; ++q) bound *= 3;
      span = std::max(span, span_residual_oracle(e, f.basis, bound));
    }
    t.check(unitarity(f.basis) <= 1e-10 && reconstruction_rel(f) <= 1e-8, "tri similarity");
    record("tri 27", f);
  }
  t.check(upper <= 1e-10, "B'_k below diagonal " + sci(upper));
  t.check(lower <= 1e-10, "A''_k above diagonal or tail " + sci(lower));
  t.check(span <= 1e-8, "span residual " + sci(span));

  for (std::size_t d : {1u, 9u, 27u}) {
    const SparsifiedForm z = tri_sparsify(Matrix(d));
    t.check(z.report.passing() && testing::max_entry_diff(z.basis, Matrix::identity(d)) == 0.0,
            "T = 0 run d=" + std::to_string(d));
    const SparsifiedForm i = tri_sparsify(Matrix::identity(d));
    t.check(i.report.passing(), "T = I run d=" + std::to_string(d));
    record("tri zero", z);
    record("tri identity", i);
  }
  return "prefix exact, B' " + sci(upper) + ", A'' " + sci(lower) + ", span " + sci(span) + ", T=0/T=I ok";
}

double cyclic_violation(const SparsifiedForm& f, const std::function<bool(std::size_t, std::size_t)>& allowed) {
  const Sizes& seg = f.segments;
  return max_where(f.transformed, [&](std::size_t i, std::size_t j) {
    const std::size_t si = segment_of(i, seg), sj = segment_of(j, seg);
    if (si != sj) return true;
    const std::size_t s0 = segment_start(si, seg) - 1;
    return !allowed(i - s0, j - s0);
  });
}

std::string criterion6(Tally& t) {
  double hess = 0, jc = 0, fam3 = 0, fam5 = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::size_t d = 1 + k % 30;
    const Matrix tm = testing::random_matrix(d, 6000 + k);
    const Vector v = testing::random_vector(d, 6500 + k);
    const SparsifiedForm h = krylov_hessenberg(tm, v);
    hess = std::max(hess, cyclic_violation(h, [](std::size_t i, std::size_t j) { return i <= j + 1; }));
    t.check(std::accumulate(h.segments.begin(), h.segments.end(), std::size_t{0}) == d, "hessenberg segments");
    record("hessenberg", h);
    const SparsifiedForm j = joint_cyclic_staircase(tm, v);
    jc = std::max(jc, cyclic_violation(j, [](std::size_t i, std::size_t c) { return i <= 2 * c && c <= 2 * i + 1; }));
    record("jointcyclic", j);
  }
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t d = 2 + k;
    const std::vector<Matrix> sa{testing::random_hermitian(d, 7000 + k), testing::random_hermitian(d, 7100 + k)};
    const std::vector<Matrix> gen{testing::random_matrix(d, 7200 + k), testing::random_matrix(d, 7300 + k)};
    for (const auto& m : family_staircase(sa, true).members) {
      fam3 = std::max(fam3, max_where(m.transformed, [](std::size_t i, std::size_t j) { return !(j <= 3 * i && i <= 3 * j); }));
      record("family selfadjoint", m);
    }
    for (const auto& m : family_staircase(gen, false).members) {
      fam5 = std::max(fam5, max_where(m.transformed, [](std::size_t i, std::size_t j) { return !(j <= 5 * i && i <= 5 * j); }));
      record("family general", m);
    }
  }
  t.check(hess <= 1e-10, "hessenberg " + sci(hess));
  t.check(jc <= 1e-10, "joint cyclic " + sci(jc));
  t.check(fam3 <= 1e-10, "family stride 3 " + sci(fam3));
  t.check(fam5 <= 1e-10, "family stride 5 " + sci(fam5));
  return "hessenberg " + sci(hess) + ", joint-cyclic " + sci(jc) + ", stride-3 " + sci(fam3) + ", stride-5 " + sci(fam5);
}

std::string criterion7(Tally& t) {
  double coupling = 0, pattern = 0;
  std::size_t splits = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    Matrix b(8);
    b.set_block(0, 0, testing::random_matrix(3, 8000 + k));
    b.set_block(3, 3, testing::random_matrix(5, 8100 + k));
    const Matrix q = testing::random_unitary(8, 8200 + k);
    const Decomposition dec = decompose(multiply(q, multiply(b, adjoint(q))));
    std::size_t total = 0;
    Sizes dims;
    for (const auto& s : dec.summands) {
      dims.push_back(s.input.rows());
      total += s.input.rows();
      pattern = std::max(pattern, cyclic_violation(s, [](std::size_t i, std::size_t j) { return i <= 2 * j && j <= 2 * i + 1; }));
      record("summand", s);
    }
    splits += dims.size() > 1 ? 1 : 0;
    t.check(total == 8, "summand dims sum to " + std::to_string(total));
    t.check(dims == dec.whole.segments, "whole-form segments differ from summand dims");
    coupling = std::max(coupling, max_where(dec.whole.transformed, [&](std::size_t i, std::size_t j) {
      return segment_of(i, dims) != segment_of(j, dims);
    }));
    t.check(unitarity(dec.whole.basis) <= 1e-10 && reconstruction_rel(dec.whole) <= 1e-8, "decompose similarity");
    record("direct sum", dec.whole);
  }
  // Block-aligned Q keeps e_1 inside the first reducing subspace, so the split is exact.
  std::size_t exact = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    Matrix b(8), q(8);
    b.set_block(0, 0, testing::random_matrix(3, 8300 + k));
    b.set_block(3, 3, testing::random_matrix(5, 8400 + k));
    q.set_block(0, 0, testing::random_unitary(3, 8500 + k));
    q.set_block(3, 3, testing::random_unitary(5, 8600 + k));
    const Decomposition dec = decompose(multiply(q, multiply(b, adjoint(q))));
    Sizes dims;
    for (const auto& s : dec.summands) {
      dims.push_back(s.input.rows());
      pattern = std::max(pattern, cyclic_violation(s, [](std::size_t i, std::size_t j) { return i <= 2 * j && j <= 2 * i + 1; }));
      record("aligned summand", s);
    }
    exact += dims == Sizes{3, 5} ? 1 : 0;
    t.check(dims == Sizes{3, 5}, "aligned fixture split");
    coupling = std::max(coupling, max_where(dec.whole.transformed, [&](std::size_t i, std::size_t j) {
      return !dims.empty() && segment_of(i, dims) != segment_of(j, dims);
    }));
    record("aligned direct sum", dec.whole);
  }
  t.check(coupling <= 1e-9, "inter-summand coupling " + sci(coupling));
  t.check(pattern <= 1e-10, "summand joint-cyclic pattern " + sci(pattern));

  Matrix diag(5);
  for (std::size_t i = 0; i < 5; ++i) diag(i, i) = double(i + 1);
  const Decomposition five = decompose(diag);
  bool ones = five.summands.size() == 5;
  for (const auto& s : five.summands) ones = ones && s.input.rows() == 1;
  t.check(ones, "diag(1..5) should give five 1x1 summands");
  record("diag direct sum", five.whole);
  return "10 rotated 3+5 fixtures (" + std::to_string(splits) + " split), " + std::to_string(exact) +
         "/10 aligned fixtures split 3+5, coupling " + sci(coupling) +
         ", diag(1..5) -> " + std::to_string(five.summands.size()) + " summands";
}

std::string criterion8(Tally& t) {
  double worst_trace = 0, worst_frob = 0;
  for (const auto& c : g_invariants) {
    const double opnorm = c.t.rows() ? svd(c.t).sigma.front() : 0.0;
    Matrix tp = c.t, mp = c.m;
    for (int p = 1; p <= 3; ++p) {
      const double scale = std::pow(opnorm, p);
      const double diff = std::abs(trace(tp) - trace(mp));
      const double rel = scale > 0 ? diff / scale : diff;
      worst_trace = std::max(worst_trace, rel);
      t.check(diff <= 1e-6 * scale || (scale == 0 && diff == 0), c.label + " trace p=" + std::to_string(p));
      tp = multiply(tp, c.t);
      mp = multiply(mp, c.m);
    }
    const double ft = frobenius_norm(c.t), fm = frobenius_norm(c.m);
    const double frel = ft > 0 ? std::abs(ft - fm) / ft : std::abs(fm);
    worst_frob = std::max(worst_frob, frel);
    t.check(frel <= 1e-8, c.label + " frobenius " + sci(frel));
  }
  return std::to_string(g_invariants.size()) + " forms, trace " + sci(worst_trace) + " x|T|^p, frobenius " + sci(worst_frob);
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(BLOCKTRID_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string criterion9(Tally& t) {
  std::size_t trips = 0;
  for (MatrixFormat f : {MatrixFormat::MatrixMarketArray, MatrixFormat::MatrixMarketCoordinate, MatrixFormat::Csv,
                         MatrixFormat::Json}) {
    for (std::uint64_t k = 0; k < 100; ++k) {
      const Matrix m = testing::random_matrix(1 + k % 20, 9000 + k);
      const Matrix back = matrix_from_string(matrix_to_string(m, f), f);
      bool same = back.rows() == m.rows() && back.cols() == m.cols();
      for (std::size_t i = 0; same && i < m.rows(); ++i)
        for (std::size_t j = 0; same && j < m.cols(); ++j) same = back(i, j) == m(i, j);
      t.check(same, std::string(format_name(f)) + " round trip " + std::to_string(k));
      ++trips;
    }
  }

  const fs::path dir = fs::temp_directory_path() / "blocktrid_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path tj = dir / "T.json";
  write_matrix_file(tj, testing::random_matrix(9, 9900), MatrixFormat::Json);
  const fs::path out = dir / "out";

  const CliRun sched = cli("schedule --schedule custom:1,2,5 --kind general");
  t.check(sched.code == 2 && sched.out.find("k=2") != std::string::npos, "schedule [1,2,5] not flagged at k=2");
  const CliRun polar = cli("polar --input " + tj.string() + " --schedule canonical --output " + out.string());
  t.check(polar.code == 0, "polar exit " + std::to_string(polar.code));
  const std::string m = (out / "M.json").string();
  t.check(cli("verify --input " + m + " --pattern polar --schedule canonical").code == 0, "verify polar should pass");
  t.check(cli("verify --input " + m + " --pattern hessenberg").code == 2, "verify hessenberg should fail with 2");
  t.check(cli("frobnicate").code == 1, "unknown subcommand should exit 1");
  t.check(cli("staircase --input " + (dir / "missing.mtx").string()).code == 1, "missing file should exit 1");
  fs::remove_all(dir);
  return std::to_string(trips) + " exact round trips, exit codes 0/1/2 and schedule k=2 confirmed";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string(Tally&)>>> criteria{
      {"5x5 fixture exactness", criterion1},   {"staircase suite", criterion2},
      {"covering oracle", criterion3},         {"polar sparsification suite", criterion4},
      {"triangular sparsification suite", criterion5}, {"cyclic and family forms", criterion6},
      {"direct sum", criterion7},              {"similarity invariants", criterion8},
      {"CLI and IO", criterion9},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Tally tally;
    std::string detail;
    try {
      detail = criteria[k].second(tally);
    } catch (const std::exception& e) {
      tally.check(false, std::string("exception: ") + e.what());
    }
    std::cout << (tally.ok() ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
              << "): " << detail << "; " << tally.summary() << std::endl;
    failed += tally.ok() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
