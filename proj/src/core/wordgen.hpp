#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace blocktrid {

/// Position in a word program's stream (1-based). The triangular program
/// places e_k at 3^k, so positions outgrow 64 bits for modest k.
using Position = boost::multiprecision::cpp_int;

/// Offer the standard basis vector e_k. k == 0 denotes the program's start
/// vector (cyclic programs).
struct Seed {
  std::size_t k = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Apply operator `op` (1-based family index), or its adjoint, to an earlier
/// vector. For orthonormal-style programs `src` is the index of an accepted
/// basis vector f_src; for raw-style programs it is the index of a surviving
/// generated vector g_src.
struct Apply {
  std::size_t op = 1;
  bool adjoint = false;
  std::size_t src = 1;
  friend bool operator==(const Apply&, const Apply&) = default;
};

using WordInstruction = std::variant<Seed, Apply>;

enum class ProgramKind { StaircaseF, T3Sequence, JointCyclic, Krylov, FamilySA, FamilyGen };

enum class SourceStyle { Orthonormal, Raw };

const char* to_string(ProgramKind kind);

/// Deterministic instruction stream. `at` returns the literal, deletion-free
/// instruction at a position; `ProgramCursor` layers the deletion rule on
/// top.
class WordProgram {
 public:
  WordProgram(ProgramKind kind, std::size_t family_size);

  ProgramKind kind() const noexcept { return kind_; }
  std::size_t family_size() const noexcept { return family_size_; }
  SourceStyle style() const noexcept;
  bool is_cyclic() const noexcept;
  /// Instructions per stage for staircase/family programs, 0 otherwise.
  std::size_t stride() const noexcept;

  /// Throws `InvalidArgument` for pos == 0 or pos > 2^62.
  WordInstruction at(std::uint64_t pos) const;

 private:
  ProgramKind kind_;
  std::size_t family_size_;
};

WordProgram staircase_program();
WordProgram t3_program();
WordProgram joint_cyclic_program();
WordProgram krylov_program();
/// Throws `InvalidArgument` for n < 1.
WordProgram family_program(std::size_t n, bool selfadjoint);

/// First `count` instructions of the triangular g-sequence.
std::vector<WordInstruction> t3_sequence(std::size_t count);

// Closed forms of the triangular g-sequence: block sizes n_1 = 1,
// n_k = 2 * 3^(k-2), partial sums s_k = 3^(k-1).
Position t3_block_size(std::size_t k);
Position t3_partial_sum(std::size_t k);
/// Position of g_n = T g_q.
Position t3_apply_position(const Position& q);
/// Position of g_n = T^* g_q.
Position t3_adjoint_position(const Position& q);
/// Position of g_n = e_k.
Position t3_seed_position(std::size_t k);

std::string to_trace_line(const WordInstruction& instruction);
std::string to_trace(std::span<const WordInstruction> instructions);
/// Parses `seed k` / `apply op adj src` lines; blank lines and `#` comments
/// are skipped.
std::vector<WordInstruction> parse_trace(std::string_view text);

struct Emission {
  Position position;
  WordInstruction instruction;  // src already in surviving numbering
};

/// Walks a program while tracking which emitted vectors survived.
///
/// A rejected emission is deleted: later sources are renumbered against the
/// surviving sequence, and (raw-style programs) instructions whose source
/// was deleted are skipped, since T g and T^* g of a dependent g are
/// dependent on vectors generated before them.
class ProgramCursor {
 public:
  explicit ProgramCursor(WordProgram program);

  /// Next instruction, or nullopt when a cyclic program's current segment is
  /// exhausted (the next instruction references a vector never produced).
  std::optional<Emission> next();

  /// Starts a new cyclic segment seeded with e_k; sources are offset past
  /// every vector accepted so far.
  void restart_segment(std::size_t seed_index);

  std::size_t survivors() const noexcept { return survivors_.size(); }
  std::size_t emitted() const noexcept { return emitted_; }
  std::optional<std::size_t> surviving_index(const Position& original) const;
  const WordProgram& program() const noexcept { return program_; }

 private:
  friend void renumber_after_deletion(ProgramCursor& state, const Position& deleted_pos);

  void finalize_last();
  std::optional<Emission> next_sequential();
  Emission next_t3();

  struct Event {
    Position position;
    Apply apply;
  };

  WordProgram program_;
  std::vector<Position> survivors_;
  std::optional<Position> last_;
  bool last_rejected_ = false;
  std::size_t emitted_ = 0;

  // sequential programs
  std::uint64_t local_pos_ = 1;
  std::size_t segment_offset_ = 0;
  std::size_t segment_seed_ = 0;
  std::uint64_t global_pos_ = 0;

  // triangular program
  std::vector<Event> pending_;  // min-heap on position
  std::size_t next_seed_level_ = 1;
};

/// Deletes the most recent emission. Throws `InvalidArgument` if
/// `deleted_pos` is not the latest, not-yet-deleted emission.
void renumber_after_deletion(ProgramCursor& state, const Position& deleted_pos);

}  // namespace blocktrid
