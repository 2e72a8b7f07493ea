#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blocktrid {

enum class ScheduleKind { General, Cyclic };

const char* to_string(ScheduleKind kind);

/// Diagonal block sizes n_1..n_K of a block tridiagonal partition.
///
/// An optional dimension truncates the partition: blocks past d are dropped
/// and the last kept block ends at d. Indices are 1-based throughout.
class BlockSchedule {
 public:
  /// Throws `Schedule` on an empty list or a zero size.
  BlockSchedule(std::vector<std::size_t> sizes, ScheduleKind kind,
                std::optional<std::size_t> dim = std::nullopt);

  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  ScheduleKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> dim() const noexcept { return dim_; }

  /// Sizes after truncation to dim (equal to sizes() without a dim).
  const std::vector<std::size_t>& effective_sizes() const noexcept { return effective_; }
  /// Partial sums s_1..s_K of the effective sizes.
  const std::vector<std::size_t>& partial_sums() const noexcept { return sums_; }
  std::size_t block_count() const noexcept { return effective_.size(); }
  /// Last covered index: s_K, or d when truncated.
  std::size_t extent() const noexcept { return sums_.back(); }
  /// First index of block k (1-based).
  std::size_t block_start(std::size_t k) const;

  /// Copy truncated at d. Throws `Schedule` when the sizes sum to less than d.
  BlockSchedule truncated(std::size_t d) const;

  /// `1,2,6,18`
  std::string to_string() const;

 private:
  std::vector<std::size_t> sizes_;
  ScheduleKind kind_;
  std::optional<std::size_t> dim_;
  std::vector<std::size_t> effective_;
  std::vector<std::size_t> sums_;
};

/// General: [n1, 2 n1, 6 n1, 18 n1, ...]; Cyclic: [n1, 2 n1, 4 n1, ...].
BlockSchedule canonical_schedule(std::size_t blocks, std::size_t n1, ScheduleKind kind);
/// Smallest canonical schedule reaching d, truncated at d.
BlockSchedule canonical_schedule_for_dim(std::size_t d, std::size_t n1, ScheduleKind kind);

/// Returns the first k (1-based) with n_{k+1} below the kind's bound
/// (2(n_1+...+n_k) for General, n_1+...+n_k for Cyclic), or nullopt.
std::optional<std::size_t> validate(const std::vector<std::size_t>& sizes, ScheduleKind kind);

/// k with s_{k-1} < i <= s_k. Throws `Schedule` when i is outside 1..extent.
std::size_t block_of(std::size_t i, const BlockSchedule& schedule);

/// True iff (i, j) lies in a C_k, A_k or B_k block.
bool covers(std::size_t i, std::size_t j, const BlockSchedule& schedule);

using PatternPredicate = std::function<bool(std::size_t i, std::size_t j)>;

/// Every (i, j) <= dim allowed by `pattern` but outside the block band.
/// Throws `Schedule` when the schedule does not reach dim.
std::vector<std::pair<std::size_t, std::size_t>> staircase_coverage_check(
    const BlockSchedule& schedule, const PatternPredicate& pattern, std::size_t dim);

/// Parses `canonical`, `cyclic`, `custom:1,2,6,18` or a bare list `1,2,6,18`.
/// Canonical forms are sized to reach d (which must then be given). The
/// kind applies to custom lists; canonical/cyclic fix their own kind.
BlockSchedule parse_schedule(std::string_view text, ScheduleKind custom_kind,
                             std::optional<std::size_t> d);

}  // namespace blocktrid
