#ifndef NCBALL_DECOMPOSITION_HPP
#define NCBALL_DECOMPOSITION_HPP

#include <cstdint>
#include <vector>

#include "ncball/types.hpp"

namespace ncball {

/// Simultaneous block upper-triangularisation of a tuple with irreducible
/// diagonal blocks (the Hölder-Jordan parts).
struct DecompositionResult {
  CMatrix basis;                    // unitary; columns adapted to the invariant flag
  std::vector<MatTuple> components;  // diagonal blocks, top-left first
  std::vector<int> block_sizes;
  MatTuple triangular;              // basis^{-1} X basis
};

/// Residual threshold for orbit growth (relative to the largest ||X_j||).
/// The rank is also recomputed at ten times this value; a disagreement
/// aborts with NumericalDegeneracy.
inline constexpr double kOrbitRankTol = 1e-9;

DecompositionResult holder_jordan(const MatTuple& X, std::uint64_t seed = 0);

/// Dimension of the unital algebra generated by the tuple (k^2 iff the tuple
/// is irreducible). Throws NumericalDegeneracy when the rank is ambiguous.
int algebra_dimension(const MatTuple& X);

/// True when no proper nonzero subspace is invariant under every X_j.
bool is_irreducible(const MatTuple& X);

}  // namespace ncball

#endif  // NCBALL_DECOMPOSITION_HPP
