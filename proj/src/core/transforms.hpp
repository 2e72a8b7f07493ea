#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "form.hpp"

namespace blocktrid {

struct TransformOptions {
  double dependence_tol = kDefaultDependenceTol;
  double threshold = kPatternThreshold;
};

/// f_1 = e_1; column n of the result is supported on rows <= 3n - 1 and
/// row n on columns <= 3n.
SparsifiedForm staircase(const OperatorMatrix& t, const TransformOptions& options = {});

/// The staircase form labelled with a block partition. Throws `Schedule`
/// unless the schedule satisfies n_{k+1} >= 2(n_1 + ... + n_k) and reaches
/// dim(t).
SparsifiedForm block_tridiagonalize(const OperatorMatrix& t, const BlockSchedule& schedule,
                                    const TransformOptions& options = {});

/// Block tridiagonal form whose superdiagonal blocks are (P'_k | 0) with
/// P'_k Hermitian positive semidefinite. A truncated final block smaller
/// than its predecessor is merged into it.
SparsifiedForm polar_sparsify(const OperatorMatrix& t, const BlockSchedule& schedule,
                              const TransformOptions& options = {});

/// Same with the subdiagonal blocks in the form (P'_k | 0)^T; computed from t^*.
SparsifiedForm polar_sparsify_alt(const OperatorMatrix& t, const BlockSchedule& schedule,
                                  const TransformOptions& options = {});

/// Polar step alone, for a matrix already block tridiagonal under
/// `schedule` (non-decreasing sizes). The basis is block diagonal.
SparsifiedForm polar_sparsify_banded(const OperatorMatrix& m, const BlockSchedule& schedule,
                                     const TransformOptions& options = {});

/// Canonical blocks (n_1 = 1) with B_k = (B'_k | 0)^T, B'_k upper
/// triangular, and A_k = (A'_k | A''_k | 0), A''_k lower triangular.
SparsifiedForm tri_sparsify(const OperatorMatrix& t, const TransformOptions& options = {});

/// Mirror image: A_k = (A'_k | 0) lower, B_k = (B'_k | B''_k | 0)^T upper.
SparsifiedForm tri_sparsify_alt(const OperatorMatrix& t, const TransformOptions& options = {});

/// Arnoldi-style basis from v, Tv, T^2 v, ...; upper Hessenberg. When v is
/// not cyclic the basis is padded with standard vectors.
SparsifiedForm krylov_hessenberg(const OperatorMatrix& t, const Vector& v,
                                 const TransformOptions& options = {});

/// Basis from v, Tv, T^*v, T^2 v, T^*Tv, ...; columns supported on rows
/// <= 2n and rows on columns <= 2n + 1 within each reducing segment.
SparsifiedForm joint_cyclic_staircase(const OperatorMatrix& t, const Vector& v,
                                      const TransformOptions& options = {});

struct FamilyForm {
  BasisChange basis;
  std::vector<SparsifiedForm> members;  // one per operator, sharing `basis`
  std::vector<LogEntry> log;

  bool passing() const;
};

/// One basis putting every S_k in staircase form with stride N + 1
/// (selfadjoint family) or 2N + 1 (general family).
FamilyForm family_staircase(std::span<const OperatorMatrix> ops, bool selfadjoint,
                            const TransformOptions& options = {});

/// Orthonormal basis (as columns) of the smallest subspace containing v and
/// invariant under both t and t^*.
Matrix reducing_closure(const OperatorMatrix& t, const Vector& v,
                        double tol = kDefaultDependenceTol);

struct Decomposition {
  SparsifiedForm whole;                 // block diagonal, segments = summand dims
  std::vector<SparsifiedForm> summands; // restrictions, each in joint-cyclic form

  bool passing() const;
};

/// Orthogonal direct sum of reducing subspaces, each seeded by the
/// lowest-index standard vector not yet captured.
Decomposition decompose(const OperatorMatrix& t, const TransformOptions& options = {});

}  // namespace blocktrid
