#include "ncball/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace ncball {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Config: return "config";
    case ErrorCode::Resource: return "resource";
    case ErrorCode::NumericalDegeneracy: return "numerical-degeneracy";
    case ErrorCode::Optimization: return "optimization";
    case ErrorCode::NotAdmissible: return "not-admissible-at-origin";
    case ErrorCode::OutsideDomain: return "outside-domain";
    case ErrorCode::UnsupportedDual: return "unsupported-dual";
    case ErrorCode::UnsupportedVariant: return "unsupported-variant";
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::Schema: return "schema";
  }
  return "unknown";
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_finite(const CMatrix& m, const char* what) {
  if (!all_finite(m)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-finite entries");
  }
}

// ---------------------------------------------------------------------------
// MatTuple

MatTuple::MatTuple(std::vector<CMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw Error(ErrorCode::Dimension, "matrix tuple needs d >= 1");
  n_ = static_cast<int>(mats_.front().rows());
  if (n_ < 1) throw Error(ErrorCode::Dimension, "matrix tuple needs n >= 1");
  for (std::size_t j = 0; j < mats_.size(); ++j) {
    if (mats_[j].rows() != n_ || mats_[j].cols() != n_) {
      std::ostringstream os;
      os << "tuple member " << j << " is " << mats_[j].rows() << "x" << mats_[j].cols()
         << ", expected " << n_ << "x" << n_;
      throw Error(ErrorCode::Dimension, os.str());
    }
    require_finite(mats_[j], "matrix tuple");
  }
}

MatTuple MatTuple::zeros(int d, int n) {
  if (d < 1 || n < 1) throw Error(ErrorCode::Dimension, "zeros: d and n must be positive");
  return MatTuple(std::vector<CMatrix>(static_cast<std::size_t>(d), CMatrix::Zero(n, n)));
}

MatTuple MatTuple::scalars(std::span<const Complex> values) {
  std::vector<CMatrix> mats;
  mats.reserve(values.size());
  for (Complex v : values) mats.push_back(CMatrix::Constant(1, 1, v));
  return MatTuple(std::move(mats));
}

MatTuple MatTuple::scalars(std::initializer_list<Complex> values) {
  return scalars(std::span<const Complex>(values.begin(), values.size()));
}

MatTuple MatTuple::conjugated(const CMatrix& S) const {
  return conjugated(S, S.partialPivLu().inverse());
}

MatTuple MatTuple::conjugated(const CMatrix& S, const CMatrix& S_inv) const {
  std::vector<CMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(S_inv * m * S);
  return MatTuple(std::move(out));
}

MatTuple MatTuple::compressed(const CMatrix& V) const {
  std::vector<CMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(V.adjoint() * m * V);
  return MatTuple(std::move(out));
}

MatTuple MatTuple::scaled(Complex lambda) const {
  std::vector<CMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(lambda * m);
  return MatTuple(std::move(out));
}

MatTuple MatTuple::adjoint() const {
  std::vector<CMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(m.adjoint());
  return MatTuple(std::move(out));
}

MatTuple MatTuple::block(int offset, int size) const {
  std::vector<CMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(m.block(offset, offset, size, size));
  return MatTuple(std::move(out));
}

CMatrix MatTuple::word(std::span<const int> w) const {
  CMatrix p = CMatrix::Identity(n_, n_);
  for (int letter : w) p = p * mats_.at(static_cast<std::size_t>(letter));
  return p;
}

double MatTuple::max_abs_diff(const MatTuple& other) const {
  if (other.d() != d() || other.n() != n()) return INFINITY;
  double diff = 0.0;
  for (int j = 0; j < d(); ++j) {
    diff = std::max(diff, (mats_[static_cast<std::size_t>(j)] - other[j]).cwiseAbs().maxCoeff());
  }
  return diff;
}

MatTuple direct_sum(const MatTuple& a, const MatTuple& b) {
  if (a.d() != b.d()) throw Error(ErrorCode::Dimension, "direct_sum: tuple lengths differ");
  const int n = a.n() + b.n();
  std::vector<CMatrix> out;
  for (int j = 0; j < a.d(); ++j) {
    CMatrix m = CMatrix::Zero(n, n);
    m.topLeftCorner(a.n(), a.n()) = a[j];
    m.bottomRightCorner(b.n(), b.n()) = b[j];
    out.push_back(std::move(m));
  }
  return MatTuple(std::move(out));
}

// ---------------------------------------------------------------------------
// Norms and spectra

double operator_norm(const CMatrix& m) {
  require_finite(m, "operator_norm");
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const CMatrix& m) {
  require_finite(m, "smallest_singular_value");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

double spectral_radius_classical(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::Dimension, "spectral radius of a non-square matrix");
  require_finite(m, "spectral_radius_classical");
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double condition_number(const CMatrix& S) {
  Eigen::JacobiSVD<CMatrix> svd(S);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : INFINITY;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out = Eigen::kroneckerProduct(a, b);
  return out;
}

CMatrix apply_pencil(const MatTuple& X, const MatTuple& Q) {
  if (X.d() != Q.d()) throw Error(ErrorCode::Dimension, "apply_pencil: tuple lengths differ");
  const Eigen::Index size = static_cast<Eigen::Index>(X.n()) * Q.n();
  CMatrix out = CMatrix::Zero(size, size);
  for (int j = 0; j < X.d(); ++j) out += kron(X[j], Q[j]);
  return out;
}

CMatrix pencil_matrix(const MatTuple& X, const MatTuple& A) {
  CMatrix p = -apply_pencil(X, A);
  p.diagonal().array() += Complex(1.0, 0.0);
  return p;
}

PencilResolvent pencil_resolvent(const MatTuple& X, const MatTuple& A) {
  const CMatrix p = pencil_matrix(X, A);
  Eigen::JacobiSVD<CMatrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  PencilResolvent out;
  out.pencil_norm = s(0);
  out.sigma_min = s(s.size() - 1);
  if (out.sigma_min <= kSingularRelTol * (1.0 + out.pencil_norm)) {
    out.singular = true;
    return out;
  }
  out.inverse = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  return out;
}

void for_each_word(const MatTuple& X, int length,
                   const std::function<void(std::span<const int>, const CMatrix&)>& visit) {
  if (length < 0) throw Error(ErrorCode::Config, "word length must be nonnegative");
  std::vector<int> word(static_cast<std::size_t>(length), 0);
  std::vector<CMatrix> prefix(static_cast<std::size_t>(length) + 1);
  prefix[0] = CMatrix::Identity(X.n(), X.n());
  if (length == 0) {
    visit(std::span<const int>(), prefix[0]);
    return;
  }
  // Iterative DFS over the d-ary tree; `depth` is the position being filled.
  int depth = 0;
  word[0] = 0;
  while (depth >= 0) {
    const auto pos = static_cast<std::size_t>(depth);
    if (word[pos] >= X.d()) {
      --depth;
      if (depth >= 0) ++word[static_cast<std::size_t>(depth)];
      continue;
    }
    prefix[pos + 1] = prefix[pos] * X[word[pos]];
    if (depth == length - 1) {
      visit(std::span<const int>(word.data(), word.size()), prefix[pos + 1]);
      ++word[pos];
    } else {
      ++depth;
      word[static_cast<std::size_t>(depth)] = 0;
    }
  }
}

// ---------------------------------------------------------------------------
// Subspace utilities

namespace {

// Two-pass Gram-Schmidt of v against the first `count` columns of Q.
CVector orthogonalize(const CMatrix& Q, Eigen::Index count, CVector v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index k = 0; k < count; ++k) {
      v -= Q.col(k) * Q.col(k).dot(v);
    }
  }
  return v;
}

int orbit_rank(const CMatrix& seed, std::span<const CMatrix> ops, double threshold, CMatrix* basis_out) {
  const Eigen::Index n = seed.rows();
  CMatrix Q(n, n);
  Eigen::Index count = 0;
  std::vector<CVector> queue;
  auto try_add = [&](const CVector& v) {
    if (count >= n) return;
    CVector r = orthogonalize(Q, count, v);
    const double rn = r.norm();
    if (rn > threshold) {
      Q.col(count) = r / rn;
      queue.push_back(Q.col(count));
      ++count;
    }
  };
  for (Eigen::Index c = 0; c < seed.cols(); ++c) try_add(seed.col(c));
  for (std::size_t head = 0; head < queue.size() && count < n; ++head) {
    const CVector v = queue[head];
    for (const auto& op : ops) {
      try_add(op * v);
      if (count >= n) break;
    }
  }
  if (basis_out) *basis_out = Q.leftCols(count);
  return static_cast<int>(count);
}

}  // namespace

OrbitBasis invariant_orbit(const CMatrix& seed, std::span<const CMatrix> ops, double tol, double scale) {
  OrbitBasis out;
  out.rank_tight = orbit_rank(seed, ops, tol * scale, &out.basis);
  out.rank_loose = orbit_rank(seed, ops, 10.0 * tol * scale, nullptr);
  return out;
}

CMatrix complete_to_unitary(const CMatrix& V) {
  Eigen::HouseholderQR<CMatrix> qr(V);
  CMatrix U = qr.householderQ();
  // Keep the given columns verbatim; the remaining Householder columns are
  // orthogonal to span(V) already.
  U.leftCols(V.cols()) = V;
  return U;
}

CMatrix hermitian_sqrt(const CMatrix& P) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(P);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix transfer_matrix(const MatTuple& X, bool column) {
  const Eigen::Index n2 = static_cast<Eigen::Index>(X.n()) * X.n();
  CMatrix phi = CMatrix::Zero(n2, n2);
  for (const auto& x : X.mats()) {
    if (column) phi += kron(x.transpose(), x.adjoint());
    else phi += kron(x.conjugate(), x);
  }
  return phi;
}

}  // namespace ncball
