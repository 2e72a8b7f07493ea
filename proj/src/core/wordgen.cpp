#include "wordgen.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "error.hpp"

namespace blocktrid {

namespace {

constexpr std::uint64_t kMaxLiteralPosition = std::uint64_t{1} << 62;

Position pow3(std::size_t e) {
  Position p = 1;
  for (std::size_t i = 0; i < e; ++i) p *= 3;
  return p;
}

std::uint64_t pow3_u64(std::size_t e) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < e; ++i) p *= 3;
  return p;
}

std::uint64_t t3_block_size_u64(std::size_t k) { return k == 1 ? 1 : 2 * pow3_u64(k - 2); }
std::uint64_t t3_partial_sum_u64(std::size_t k) { return k == 0 ? 0 : pow3_u64(k - 1); }

WordInstruction t3_at(std::uint64_t n) {
  if (n == 1) return Seed{1};
  if (n == 2) return Apply{1, false, 1};
  if (n == 3) return Apply{1, true, 1};
  std::size_t k = 2;
  while (t3_partial_sum_u64(k + 1) < n) ++k;
  const std::uint64_t r = n - t3_partial_sum_u64(k);
  if (r <= t3_block_size_u64(k))
    return Apply{1, false, static_cast<std::size_t>(t3_partial_sum_u64(k - 1) + r)};
  if (r < t3_block_size_u64(k + 1))
    return Apply{1, true, static_cast<std::size_t>(r + 1 - k)};
  return Seed{k};
}

bool event_after(const auto& a, const auto& b) { return a.position > b.position; }

}  // namespace

const char* to_string(ProgramKind kind) {
  switch (kind) {
    case ProgramKind::StaircaseF: return "staircase";
    case ProgramKind::T3Sequence: return "t3";
    case ProgramKind::JointCyclic: return "joint-cyclic";
    case ProgramKind::Krylov: return "krylov";
    case ProgramKind::FamilySA: return "family-selfadjoint";
    case ProgramKind::FamilyGen: return "family-general";
  }
  return "unknown";
}

WordProgram::WordProgram(ProgramKind kind, std::size_t family_size)
    : kind_(kind), family_size_(family_size) {
  if (family_size_ < 1) throw Error(ErrorCode::InvalidArgument, "family size must be >= 1");
  if (kind_ != ProgramKind::FamilySA && kind_ != ProgramKind::FamilyGen && family_size_ != 1)
    throw Error(ErrorCode::InvalidArgument, "single-operator program with family size != 1");
}

SourceStyle WordProgram::style() const noexcept {
  return kind_ == ProgramKind::T3Sequence ? SourceStyle::Raw : SourceStyle::Orthonormal;
}

bool WordProgram::is_cyclic() const noexcept {
  return kind_ == ProgramKind::JointCyclic || kind_ == ProgramKind::Krylov;
}

std::size_t WordProgram::stride() const noexcept {
  switch (kind_) {
    case ProgramKind::StaircaseF: return 3;
    case ProgramKind::FamilySA: return family_size_ + 1;
    case ProgramKind::FamilyGen: return 2 * family_size_ + 1;
    default: return 0;
  }
}

WordInstruction WordProgram::at(std::uint64_t pos) const {
  if (pos == 0 || pos > kMaxLiteralPosition)
    throw Error(ErrorCode::InvalidArgument, "program position out of range");
  switch (kind_) {
    case ProgramKind::T3Sequence:
      return t3_at(pos);
    case ProgramKind::Krylov:
      if (pos == 1) return Seed{0};
      return Apply{1, false, static_cast<std::size_t>(pos - 1)};
    case ProgramKind::JointCyclic:
      if (pos == 1) return Seed{0};
      return Apply{1, pos % 2 == 1, static_cast<std::size_t>(pos / 2)};
    case ProgramKind::StaircaseF:
    case ProgramKind::FamilySA:
    case ProgramKind::FamilyGen: {
      const std::uint64_t s = stride();
      const auto stage = static_cast<std::size_t>((pos - 1) / s + 1);
      const std::uint64_t offset = (pos - 1) % s;
      if (offset == 0) return Seed{stage};
      if (kind_ == ProgramKind::FamilySA)
        return Apply{static_cast<std::size_t>(offset), false, stage};
      return Apply{static_cast<std::size_t>((offset - 1) / 2 + 1), offset % 2 == 0, stage};
    }
  }
  throw Error(ErrorCode::Internal, "unknown program kind");
}

WordProgram staircase_program() { return {ProgramKind::StaircaseF, 1}; }
WordProgram t3_program() { return {ProgramKind::T3Sequence, 1}; }
WordProgram joint_cyclic_program() { return {ProgramKind::JointCyclic, 1}; }
WordProgram krylov_program() { return {ProgramKind::Krylov, 1}; }

WordProgram family_program(std::size_t n, bool selfadjoint) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "family_program: N must be >= 1");
  return {selfadjoint ? ProgramKind::FamilySA : ProgramKind::FamilyGen, n};
}

std::vector<WordInstruction> t3_sequence(std::size_t count) {
  const WordProgram p = t3_program();
  std::vector<WordInstruction> out;
  out.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) out.push_back(p.at(n));
  return out;
}

Position t3_block_size(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "block index starts at 1");
  return k == 1 ? Position(1) : Position(2 * pow3(k - 2));
}

Position t3_partial_sum(std::size_t k) { return k == 0 ? Position(0) : pow3(k - 1); }

Position t3_apply_position(const Position& q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "source position must be >= 1");
  std::size_t k = 1;
  while (t3_partial_sum(k) < q) ++k;
  return q + t3_block_size(k);
}

Position t3_adjoint_position(const Position& q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "source position must be >= 1");
  if (q == 1) return 3;
  // Level k adjoint range covers q in [n_k + 2 - k, n_{k+1} - k].
  std::size_t k = 2;
  while (t3_block_size(k + 1) - k < q) ++k;
  return t3_partial_sum(k) + q + (k - 1);
}

Position t3_seed_position(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "seed index starts at 1");
  return k == 1 ? Position(1) : pow3(k);
}

std::string to_trace_line(const WordInstruction& instruction) {
  if (const auto* s = std::get_if<Seed>(&instruction)) return "seed " + std::to_string(s->k);
  const auto& a = std::get<Apply>(instruction);
  return "apply " + std::to_string(a.op) + " " + (a.adjoint ? "1" : "0") + " " +
         std::to_string(a.src);
}

std::string to_trace(std::span<const WordInstruction> instructions) {
  std::string out;
  for (const auto& ins : instructions) out += to_trace_line(ins) + "\n";
  return out;
}

std::vector<WordInstruction> parse_trace(std::string_view text) {
  std::vector<WordInstruction> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::Parse, "trace line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word == "seed") {
      std::size_t k;
      if (!(ls >> k)) fail("expected seed index");
      out.emplace_back(Seed{k});
    } else if (word == "apply") {
      std::size_t op, src;
      int adj;
      if (!(ls >> op >> adj >> src) || (adj != 0 && adj != 1) || op == 0 || src == 0)
        fail("expected 'apply op adj src'");
      out.emplace_back(Apply{op, adj == 1, src});
    } else {
      fail("unknown instruction '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  return out;
}

ProgramCursor::ProgramCursor(WordProgram program) : program_(program) {}

std::optional<std::size_t> ProgramCursor::surviving_index(const Position& original) const {
  auto it = std::lower_bound(survivors_.begin(), survivors_.end(), original);
  if (it == survivors_.end() || *it != original) return std::nullopt;
  return static_cast<std::size_t>(it - survivors_.begin()) + 1;
}

void ProgramCursor::finalize_last() {
  if (!last_ || last_rejected_) {
    last_.reset();
    return;
  }
  survivors_.push_back(*last_);
  if (program_.kind() == ProgramKind::T3Sequence) {
    const std::size_t src = survivors_.size();
    pending_.push_back({t3_apply_position(*last_), Apply{1, false, src}});
    std::push_heap(pending_.begin(), pending_.end(),
                   [](const Event& a, const Event& b) { return event_after(a, b); });
    pending_.push_back({t3_adjoint_position(*last_), Apply{1, true, src}});
    std::push_heap(pending_.begin(), pending_.end(),
                   [](const Event& a, const Event& b) { return event_after(a, b); });
  }
  last_.reset();
}

std::optional<Emission> ProgramCursor::next() {
  finalize_last();
  std::optional<Emission> e;
  if (program_.kind() == ProgramKind::T3Sequence)
    e = next_t3();
  else
    e = next_sequential();
  if (e) {
    last_ = e->position;
    last_rejected_ = false;
    ++emitted_;
  }
  return e;
}

std::optional<Emission> ProgramCursor::next_sequential() {
  WordInstruction ins = program_.at(local_pos_);
  if (auto* a = std::get_if<Apply>(&ins)) {
    a->src += segment_offset_;
    if (a->src > survivors_.size()) {
      if (!program_.is_cyclic())
        throw Error(ErrorCode::Internal, "program references a basis vector not yet built");
      return std::nullopt;
    }
  } else if (segment_offset_ > 0 || segment_seed_ > 0) {
    auto& s = std::get<Seed>(ins);
    if (s.k == 0) s.k = segment_seed_;
  }
  ++local_pos_;
  return Emission{Position(++global_pos_), ins};
}

Emission ProgramCursor::next_t3() {
  const auto later = [](const Event& a, const Event& b) { return event_after(a, b); };
  const Position seed_pos = t3_seed_position(next_seed_level_);
  if (pending_.empty() || seed_pos < pending_.front().position) {
    return Emission{seed_pos, Seed{next_seed_level_++}};
  }
  std::pop_heap(pending_.begin(), pending_.end(), later);
  Event ev = std::move(pending_.back());
  pending_.pop_back();
  return Emission{std::move(ev.position), ev.apply};
}

void ProgramCursor::restart_segment(std::size_t seed_index) {
  if (!program_.is_cyclic())
    throw Error(ErrorCode::InvalidArgument, "restart_segment: program is not cyclic");
  if (seed_index == 0)
    throw Error(ErrorCode::InvalidArgument, "restart_segment: seed index starts at 1");
  finalize_last();
  segment_offset_ = survivors_.size();
  segment_seed_ = seed_index;
  local_pos_ = 1;
}

void renumber_after_deletion(ProgramCursor& state, const Position& deleted_pos) {
  if (!state.last_ || state.last_rejected_ || *state.last_ != deleted_pos)
    throw Error(ErrorCode::InvalidArgument,
                "renumber_after_deletion: position " + deleted_pos.str() +
                    " is not the latest pending emission");
  state.last_rejected_ = true;
}

}  // namespace blocktrid
