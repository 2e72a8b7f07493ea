#include "schedule.hpp"

#include <algorithm>
#include <charconv>

#include "error.hpp"

namespace blocktrid {

const char* to_string(ScheduleKind kind) {
  return kind == ScheduleKind::General ? "general" : "cyclic";
}

BlockSchedule::BlockSchedule(std::vector<std::size_t> sizes, ScheduleKind kind,
                             std::optional<std::size_t> dim)
    : sizes_(std::move(sizes)), kind_(kind), dim_(dim) {
  if (sizes_.empty()) throw Error(ErrorCode::Schedule, "schedule has no blocks");
  for (std::size_t n : sizes_)
    if (n == 0) throw Error(ErrorCode::Schedule, "schedule block sizes must be positive");
  if (dim_ && *dim_ == 0) throw Error(ErrorCode::Schedule, "schedule dimension must be positive");

  std::size_t total = 0;
  for (std::size_t n : sizes_) {
    if (dim_ && total >= *dim_) break;
    const std::size_t take = dim_ ? std::min(n, *dim_ - total) : n;
    total += take;
    effective_.push_back(take);
    sums_.push_back(total);
  }
  if (dim_ && total < *dim_)
    throw Error(ErrorCode::Schedule, "schedule " + to_string() + " covers only " +
                                         std::to_string(total) + " of " +
                                         std::to_string(*dim_) + " indices");
}

std::size_t BlockSchedule::block_start(std::size_t k) const {
  if (k == 0 || k > block_count()) throw Error(ErrorCode::Schedule, "block index out of range");
  return k == 1 ? 1 : sums_[k - 2] + 1;
}

BlockSchedule BlockSchedule::truncated(std::size_t d) const {
  return BlockSchedule(sizes_, kind_, d);
}

std::string BlockSchedule::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes_[i]);
  }
  return out;
}

BlockSchedule canonical_schedule(std::size_t blocks, std::size_t n1, ScheduleKind kind) {
  if (blocks == 0 || n1 == 0)
    throw Error(ErrorCode::Schedule, "canonical_schedule: blocks and n1 must be positive");
  std::vector<std::size_t> sizes{n1};
  std::size_t next = 2 * n1;
  for (std::size_t k = 2; k <= blocks; ++k) {
    sizes.push_back(next);
    next *= kind == ScheduleKind::General ? 3 : 2;
  }
  return BlockSchedule(std::move(sizes), kind);
}

BlockSchedule canonical_schedule_for_dim(std::size_t d, std::size_t n1, ScheduleKind kind) {
  if (d == 0) throw Error(ErrorCode::Schedule, "dimension must be positive");
  std::size_t blocks = 1;
  while (true) {
    BlockSchedule s = canonical_schedule(blocks, n1, kind);
    if (s.extent() >= d) return s.truncated(d);
    ++blocks;
  }
}

std::optional<std::size_t> validate(const std::vector<std::size_t>& sizes, ScheduleKind kind) {
  if (sizes.empty()) throw Error(ErrorCode::Schedule, "validate: empty schedule");
  const std::size_t factor = kind == ScheduleKind::General ? 2 : 1;
  std::size_t sum = 0;
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    sum += sizes[k - 1];
    if (sizes[k] < factor * sum) return k;
  }
  return std::nullopt;
}

std::size_t block_of(std::size_t i, const BlockSchedule& schedule) {
  const auto& sums = schedule.partial_sums();
  if (i == 0 || i > sums.back())
    throw Error(ErrorCode::Schedule, "block_of: index " + std::to_string(i) +
                                         " outside 1.." + std::to_string(sums.back()));
  const auto it = std::lower_bound(sums.begin(), sums.end(), i);
  return static_cast<std::size_t>(it - sums.begin()) + 1;
}

bool covers(std::size_t i, std::size_t j, const BlockSchedule& schedule) {
  const std::size_t bi = block_of(i, schedule);
  const std::size_t bj = block_of(j, schedule);
  return (bi > bj ? bi - bj : bj - bi) <= 1;
}

std::vector<std::pair<std::size_t, std::size_t>> staircase_coverage_check(
    const BlockSchedule& schedule, const PatternPredicate& pattern, std::size_t dim) {
  if (schedule.extent() < dim)
    throw Error(ErrorCode::Schedule, "coverage check: schedule reaches " +
                                         std::to_string(schedule.extent()) + " < " +
                                         std::to_string(dim));
  std::vector<std::pair<std::size_t, std::size_t>> uncovered;
  for (std::size_t i = 1; i <= dim; ++i)
    for (std::size_t j = 1; j <= dim; ++j)
      if (pattern(i, j) && !covers(i, j, schedule)) uncovered.emplace_back(i, j);
  return uncovered;
}

BlockSchedule parse_schedule(std::string_view text, ScheduleKind custom_kind,
                             std::optional<std::size_t> d) {
  if (text == "canonical" || text == "cyclic") {
    if (!d) throw Error(ErrorCode::Schedule, "schedule '" + std::string(text) + "' needs a dimension");
    return canonical_schedule_for_dim(
        *d, 1, text == "canonical" ? ScheduleKind::General : ScheduleKind::Cyclic);
  }
  if (text.starts_with("custom:")) text.remove_prefix(7);
  std::vector<std::size_t> sizes;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string_view token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
      throw Error(ErrorCode::Parse, "bad schedule entry '" + std::string(token) + "'");
    sizes.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (sizes.empty()) throw Error(ErrorCode::Parse, "empty schedule");
  BlockSchedule s(std::move(sizes), custom_kind);
  return d ? s.truncated(*d) : s;
}

}  // namespace blocktrid
