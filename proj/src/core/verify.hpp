#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "numkernel.hpp"
#include "schedule.hpp"

namespace blocktrid {

// Thresholds a report must meet to pass.
inline constexpr double kPatternThreshold = 1e-10;
inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kReconstructionRelTol = 1e-8;
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kSpanTol = 1e-8;
inline constexpr double kTraceRelTol = 1e-6;
inline constexpr double kFrobeniusRelTol = 1e-8;
inline constexpr double kCouplingTol = 1e-9;

enum class PatternKind {
  StaircaseCoarse,   // j <= 3i, i <= 3j
  StaircaseRefined,  // j <= 3i, i <= 3j - 1
  JointCyclic,       // i <= 2j, j <= 2i + 1
  Hessenberg,        // i <= j + 1
  FamilyStride,      // j <= s i, i <= s j
  BlockBand,         // |block(i) - block(j)| <= 1
  PolarBlocks,       // band, A_k = (P'_k | 0)
  TriBlocks,         // band, B_k = (B'_k | 0)^T upper, A_k = (A'_k | A''_k | 0) lower
};

/// Which entries of a matrix may be nonzero. Indices are 1-based.
struct PatternSpec {
  PatternKind kind = PatternKind::StaircaseCoarse;
  std::optional<BlockSchedule> schedule;  // block patterns
  std::size_t stride = 0;                 // FamilyStride
  bool transposed = false;                // the "alternative" (adjoint) variants
  /// Block-diagonal split into independent segments, each carrying the
  /// pattern in local indices. Empty means a single segment.
  std::vector<std::size_t> segments;

  bool allowed(std::size_t i, std::size_t j) const;
  std::string name() const;

  static PatternSpec staircase_coarse() { PatternSpec p; p.kind = PatternKind::StaircaseCoarse; return p; }
  static PatternSpec staircase_refined() { PatternSpec p; p.kind = PatternKind::StaircaseRefined; return p; }
  static PatternSpec joint_cyclic() { PatternSpec p; p.kind = PatternKind::JointCyclic; return p; }
  static PatternSpec hessenberg() { PatternSpec p; p.kind = PatternKind::Hessenberg; return p; }
  static PatternSpec family_stride(std::size_t s);
  static PatternSpec block_band(BlockSchedule s);
  static PatternSpec polar_blocks(BlockSchedule s, bool transposed = false);
  static PatternSpec tri_blocks(BlockSchedule s, bool transposed = false);
};

/// Names accepted: staircase, staircase-refined, jointcyclic, hessenberg,
/// family:S, band, polar, polar-alt, tri, tri-alt. Block patterns need a
/// schedule.
PatternSpec parse_pattern(std::string_view name, const std::optional<BlockSchedule>& schedule);

struct Violation {
  std::size_t i = 0;
  std::size_t j = 0;
  double magnitude = 0.0;
};

/// Entries with |M(i,j)| > threshold that the pattern forbids.
std::vector<Violation> check_pattern(const Matrix& m, const PatternSpec& pattern,
                                     double threshold = kPatternThreshold);

struct BlockMeasure {
  std::size_t block = 0;
  double value = 0.0;
};

struct SpanCheck {
  std::size_t n = 0;
  std::size_t bound = 0;
  double residual = 0.0;
};

struct VerificationReport {
  std::string form;
  std::string pattern;
  double threshold = kPatternThreshold;

  double unitarity_residual = 0.0;
  double reconstruction_residual = 0.0;
  double reconstruction_bound = 0.0;
  std::vector<Violation> pattern_violations;

  // Polar forms: per off-diagonal block k.
  std::vector<BlockMeasure> psd_min_eig;
  std::vector<BlockMeasure> psd_bound;
  std::vector<BlockMeasure> hermitian_residuals;
  std::vector<BlockMeasure> tail_residuals;

  // Triangular forms: strict-part magnitudes of B'_k and A''_k.
  std::vector<BlockMeasure> lower_triangular_residuals;
  std::vector<BlockMeasure> upper_triangular_residuals;

  std::vector<SpanCheck> span_residuals;

  std::array<double, 3> trace_deviation{};
  std::array<double, 3> trace_bound{};
  double frobenius_deviation = 0.0;
  double frobenius_bound = 0.0;

  std::vector<std::size_t> segments;
  std::optional<double> coupling;  // direct sums: largest inter-summand entry

  bool passing() const;
  nlohmann::json to_json() const;
};

struct SparsifiedForm;

/// The pattern a form of this kind must satisfy.
PatternSpec pattern_for(const SparsifiedForm& form);

/// Every residual family relevant to the form's kind.
VerificationReport full_report(const SparsifiedForm& form, double threshold = kPatternThreshold);

/// Report for a bare matrix against a pattern (the `verify` subcommand).
VerificationReport pattern_report(const Matrix& m, const PatternSpec& pattern,
                                  double threshold = kPatternThreshold);

}  // namespace blocktrid
