#ifndef NCBALL_MATCORE_HPP
#define NCBALL_MATCORE_HPP

#include <functional>
#include <optional>

#include "ncball/types.hpp"

namespace ncball {

/// Largest singular value. Throws InvalidInput on non-finite entries.
double operator_norm(const CMatrix& m);
double smallest_singular_value(const CMatrix& m);

/// Max |lambda| over the eigenvalues of a square matrix.
double spectral_radius_classical(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Sum_j X_j (x) Q_j, left factor indexing the blocks.
CMatrix apply_pencil(const MatTuple& X, const MatTuple& Q);

/// I - Sum_j X_j (x) A_j.
CMatrix pencil_matrix(const MatTuple& X, const MatTuple& A);

/// A pencil is treated as singular when sigma_min <= kSingularRelTol * (1 + ||P||).
inline constexpr double kSingularRelTol = 1e-12;

struct PencilResolvent {
  bool singular = false;
  double sigma_min = 0.0;
  double pencil_norm = 0.0;
  CMatrix inverse;  // empty when singular
};

/// (I - Sum_j X_j (x) A_j)^{-1}, or a singular flag carrying sigma_min.
PencilResolvent pencil_resolvent(const MatTuple& X, const MatTuple& A);

/// Visits every word of length `length` over {0..d-1} in lexicographic order
/// together with the product X^w. Prefix products are shared.
void for_each_word(const MatTuple& X, int length,
                   const std::function<void(std::span<const int>, const CMatrix&)>& visit);

/// Result of growing a subspace under a family of matrices.
struct OrbitBasis {
  CMatrix basis;  // orthonormal columns
  int rank_tight = 0;
  int rank_loose = 0;
  bool ambiguous() const { return rank_tight != rank_loose; }
};

/// Orthonormal basis of the smallest subspace containing the columns of
/// `seed` and invariant under every matrix in `ops` (breadth first, two-pass
/// Gram-Schmidt). A new direction is kept when its residual exceeds
/// `tol * scale`; the rank is also recomputed at `10 * tol` so callers can
/// detect ambiguous decisions.
OrbitBasis invariant_orbit(const CMatrix& seed, std::span<const CMatrix> ops, double tol,
                           double scale);

/// Unitary whose leading columns span the columns of the isometry V.
CMatrix complete_to_unitary(const CMatrix& V);

/// Hermitian square root of a Hermitian positive semidefinite matrix.
CMatrix hermitian_sqrt(const CMatrix& P);

double condition_number(const CMatrix& S);

/// Matrix of the completely positive map Y -> Sum_j X_j Y X_j^* acting on
/// column-major vec(Y), i.e. Sum_j conj(X_j) (x) X_j. With `column` set the map
/// is Y -> Sum_j X_j^* Y X_j instead.
CMatrix transfer_matrix(const MatTuple& X, bool column = false);

}  // namespace ncball

#endif  // NCBALL_MATCORE_HPP
