#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "numkernel.hpp"
#include "wordgen.hpp"

namespace blocktrid {

struct BuildOptions {
  double tol = kDefaultDependenceTol;
  /// Defaults to default_instruction_cap(dim).
  std::optional<std::size_t> instruction_cap;
  /// Vector offered for Seed(0); required by cyclic programs.
  Vector start_vector;
};

struct LogEntry {
  Position position;
  WordInstruction instruction;
  bool accepted = false;
  double residual_norm = 0.0;
  std::size_t basis_index = 0;  // 1-based index of the accepted f, 0 if rejected
  std::size_t segment = 1;
};

struct BuildResult {
  BasisChange basis;
  std::vector<LogEntry> log;
  /// Dimensions of the cyclic segments in order (a single entry equal to
  /// dim for non-cyclic programs). The first entry is the dimension of the
  /// closure of the start vector.
  std::vector<std::size_t> segments;
};

std::size_t default_instruction_cap(std::size_t dim);

/// Executes `program` against `ops` (each dim x dim) until dim orthonormal
/// vectors have been accepted. Throws `Internal` if the instruction cap is
/// hit first.
BuildResult run_program(std::span<const OperatorMatrix> ops, const WordProgram& program,
                        std::size_t dim, const BuildOptions& options = {});

/// U^* T U. Throws `InvalidArgument` when |U^*U - I|_max > 1e-8.
OperatorMatrix conjugate(const OperatorMatrix& t, const BasisChange& u);

/// Distance from e_n (1-based) to span{f_1, ..., f_min(m, dim)}.
double span_residual(std::size_t n, const BasisChange& u, std::size_t m);

nlohmann::json log_to_json(std::span<const LogEntry> log);

}  // namespace blocktrid
