#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "basisbuild.hpp"
#include "numkernel.hpp"
#include "schedule.hpp"
#include "verify.hpp"

namespace blocktrid {

enum class FormKind {
  Staircase,
  BlockTridiag,
  PolarSparse,
  PolarSparseAlt,
  TriSparse,
  TriSparseAlt,
  Hessenberg,
  JointCyclic,
  Family,
  DirectSummand,
  DirectSum,
};

const char* to_string(FormKind kind);

/// Result of one sparsifying pipeline: `transformed` = basis^* input basis.
struct SparsifiedForm {
  OperatorMatrix input;
  BasisChange basis;
  OperatorMatrix transformed;
  std::optional<BlockSchedule> schedule;
  FormKind kind = FormKind::Staircase;
  std::size_t family_index = 0;   // 1-based member index for Family
  std::size_t family_stride = 0;  // Family
  /// Cyclic forms and direct sums: dimensions of the invariant segments.
  std::vector<std::size_t> segments;
  std::vector<LogEntry> log;
  VerificationReport report;
};

}  // namespace blocktrid
