#include "ncball/decomposition.hpp"

#include <algorithm>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ncball/matcore.hpp"
#include "ncball/random.hpp"

namespace ncball {

namespace {

double max_member_norm(const MatTuple& X) {
  double s = 0.0;
  for (const auto& x : X.mats()) s = std::max(s, operator_norm(x));
  return s;
}

OrbitBasis algebra_orbit(const MatTuple& Xn) {
  const int k = Xn.n();
  const CMatrix id = CMatrix::Identity(k, k);
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<std::size_t>(Xn.d()));
  for (const auto& x : Xn.mats()) ops.push_back(kron(id, x));
  const CVector seed = Eigen::Map<const CVector>(id.data(), id.size());
  return invariant_orbit(seed, ops, kOrbitRankTol, 1.0);
}

// Eigenvalues grouped into clusters; each cluster is represented by its mean,
// which is far more accurate than any single eigenvalue of a defective cluster.
std::vector<Complex> clustered_eigenvalues(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  const double tol = 1e-4 * (1.0 + operator_norm(a));
  std::vector<std::vector<Complex>> clusters;
  for (const Complex& z : ev) {
    bool placed = false;
    for (auto& c : clusters) {
      for (const Complex& y : c) {
        if (std::abs(y - z) <= tol) {
          c.push_back(z);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) clusters.push_back({z});
  }
  std::vector<Complex> means;
  for (const auto& c : clusters) {
    Complex s = 0.0;
    for (const Complex& y : c) s += y;
    means.push_back(s / static_cast<double>(c.size()));
  }
  return means;
}

// Right singular vectors of a - lambda I belonging to (near) zero singular values;
// at least one is always returned.
std::vector<CVector> near_kernel(const CMatrix& a, Complex lambda) {
  const Eigen::Index k = a.rows();
  CMatrix shifted = a - lambda * CMatrix::Identity(k, k);
  Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = 1e-7 * (1.0 + operator_norm(a));
  std::vector<CVector> out;
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    if (i == k - 1 || s(i) <= cut) out.push_back(svd.matrixV().col(i));
    else break;
  }
  return out;
}

// Smallest proper invariant subspace found from eigenvectors of random algebra
// elements (for X and for the adjoint tuple). Returns an orthonormal basis.
std::optional<CMatrix> find_invariant_subspace(const MatTuple& Xn, const CMatrix& algebra_basis, Rng& rng) {
  const int k = Xn.n();
  const MatTuple Xa = Xn.adjoint();
  bool ambiguous = false;
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    CVector coeff(algebra_basis.cols());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = rng.complex_normal();
    const CVector va = algebra_basis * coeff;
    const CMatrix a = Eigen::Map<const CMatrix>(va.data(), k, k);

    std::optional<CMatrix> best;
    auto consider = [&](const CMatrix& sub) {
      if (!best || sub.cols() < best->cols()) best = sub;
    };
    for (int side = 0; side < 2; ++side) {
      const CMatrix elem = side == 0 ? a : CMatrix(a.adjoint());
      const MatTuple& T = side == 0 ? Xn : Xa;
      for (const Complex& lambda : clustered_eigenvalues(elem)) {
        for (const CVector& v : near_kernel(elem, lambda)) {
          const OrbitBasis orb = invariant_orbit(v, T.mats(), kOrbitRankTol, 1.0);
          if (orb.ambiguous()) {
            ambiguous = true;
            continue;
          }
          if (orb.rank_tight >= k) continue;
          if (side == 0) {
            consider(orb.basis);
          } else {
            // The orthogonal complement of an X*-invariant subspace is X-invariant.
            const CMatrix U = complete_to_unitary(orb.basis);
            consider(U.rightCols(k - orb.rank_tight));
          }
        }
      }
    }
    if (best) return best;
  }
  if (ambiguous) throw Error(ErrorCode::NumericalDegeneracy, "invariant subspace rank is ambiguous");
  return std::nullopt;
}

struct Split {
  CMatrix basis;
  std::vector<int> sizes;
};

Split split_recursive(const MatTuple& Xn, Rng& rng) {
  const int k = Xn.n();
  if (k == 1) return {CMatrix::Identity(1, 1), {1}};
  const OrbitBasis alg = algebra_orbit(Xn);
  if (alg.ambiguous()) throw Error(ErrorCode::NumericalDegeneracy, "algebra dimension is ambiguous");
  if (alg.rank_tight == k * k) return {CMatrix::Identity(k, k), {k}};

  const auto W = find_invariant_subspace(Xn, alg.basis, rng);
  if (!W) throw Error(ErrorCode::NumericalDegeneracy, "reducible tuple but no invariant subspace was isolated");
  const int s = static_cast<int>(W->cols());
  const CMatrix Q = complete_to_unitary(*W);
  const MatTuple Y = Xn.compressed(Q);
  for (const auto& y : Y.mats()) {
    if (y.bottomLeftCorner(k - s, s).norm() > 10.0 * kOrbitRankTol * std::max(1, k))
      throw Error(ErrorCode::NumericalDegeneracy, "invariant subspace failed verification");
  }
  const Split top = split_recursive(Y.block(0, s), rng);
  const Split bottom = split_recursive(Y.block(s, k - s), rng);
  CMatrix inner = CMatrix::Zero(k, k);
  inner.topLeftCorner(s, s) = top.basis;
  inner.bottomRightCorner(k - s, k - s) = bottom.basis;
  Split out{Q * inner, top.sizes};
  out.sizes.insert(out.sizes.end(), bottom.sizes.begin(), bottom.sizes.end());
  return out;
}

DecompositionResult assemble(const MatTuple& X, CMatrix basis, std::vector<int> sizes) {
  DecompositionResult r;
  r.triangular = X.compressed(basis);
  int offset = 0;
  for (int b : sizes) {
    r.components.push_back(r.triangular.block(offset, b));
    offset += b;
  }
  r.basis = std::move(basis);
  r.block_sizes = std::move(sizes);
  return r;
}

}  // namespace

int algebra_dimension(const MatTuple& X) {
  const double scale = max_member_norm(X);
  if (scale == 0.0) return 1;
  const OrbitBasis alg = algebra_orbit(X.scaled(1.0 / scale));
  if (alg.ambiguous()) throw Error(ErrorCode::NumericalDegeneracy, "algebra dimension is ambiguous");
  return alg.rank_tight;
}

bool is_irreducible(const MatTuple& X) { return algebra_dimension(X) == X.n() * X.n(); }

DecompositionResult holder_jordan(const MatTuple& X, std::uint64_t seed) {
  const int n = X.n();
  const double scale = max_member_norm(X);
  if (scale == 0.0 || n == 1) {
    return assemble(X, CMatrix::Identity(n, n), std::vector<int>(static_cast<std::size_t>(n), 1));
  }
  if (X.d() == 1) {
    // A single matrix: the Schur form already has 1x1 irreducible blocks.
    Eigen::ComplexSchur<CMatrix> schur(X[0]);
    return assemble(X, schur.matrixU(), std::vector<int>(static_cast<std::size_t>(n), 1));
  }
  Rng rng(derive_seed(seed, {0x484aULL}));
  Split sp = split_recursive(X.scaled(1.0 / scale), rng);
  return assemble(X, std::move(sp.basis), std::move(sp.sizes));
}

}  // namespace ncball
