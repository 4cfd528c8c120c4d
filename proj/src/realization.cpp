#include "ncball/realization.hpp"

#include <algorithm>
#include <sstream>

#include "ncball/matcore.hpp"

namespace ncball {

void DescriptorRealization::validate() const {
  if (A.empty()) throw Error(ErrorCode::Dimension, "realization needs d >= 1");
  const int m = A.n();
  if (b.size() != m || c.size() != m) {
    std::ostringstream os;
    os << "realization vectors must have length " << m << " (b has " << b.size() << ", c has " << c.size() << ")";
    throw Error(ErrorCode::Dimension, os.str());
  }
  require_finite(b, "b");
  require_finite(c, "c");
}

void FMRealization::validate() const {
  if (A.empty()) throw Error(ErrorCode::Dimension, "realization needs d >= 1");
  const int m = A.n();
  if (static_cast<int>(B.size()) != A.d()) throw Error(ErrorCode::Dimension, "FM realization needs one input vector per variable");
  for (const auto& bj : B) {
    if (bj.size() != m) throw Error(ErrorCode::Dimension, "FM input vectors must have the state dimension");
    require_finite(bj, "b_j");
  }
  if (c.size() != m) throw Error(ErrorCode::Dimension, "FM output vector must have the state dimension");
  require_finite(c, "c");
  if (!std::isfinite(d0.real()) || !std::isfinite(d0.imag())) throw Error(ErrorCode::InvalidInput, "d0 must be finite");
}

// ---------------------------------------------------------------------------
// Realization arithmetic

namespace {

MatTuple block_tuple(const MatTuple& top_left, const std::vector<CMatrix>& top_right, const MatTuple& bottom_right) {
  const int m1 = top_left.n();
  const int m2 = bottom_right.n();
  std::vector<CMatrix> mats;
  for (int j = 0; j < top_left.d(); ++j) {
    CMatrix a = CMatrix::Zero(m1 + m2, m1 + m2);
    a.topLeftCorner(m1, m1) = top_left[j];
    if (!top_right.empty()) a.topRightCorner(m1, m2) = top_right[static_cast<std::size_t>(j)];
    a.bottomRightCorner(m2, m2) = bottom_right[j];
    mats.push_back(std::move(a));
  }
  return MatTuple(std::move(mats));
}

CVector stack(const CVector& a, const CVector& b) {
  CVector out(a.size() + b.size());
  out << a, b;
  return out;
}

void require_same_d(const DescriptorRealization& f, const DescriptorRealization& g) {
  if (f.d() != g.d()) throw Error(ErrorCode::Dimension, "realizations disagree on the number of variables");
}

}  // namespace

DescriptorRealization realize_constant(Complex value, int d) {
  if (d < 1) throw Error(ErrorCode::Dimension, "d must be >= 1");
  DescriptorRealization r;
  r.A = MatTuple::zeros(d, 1);
  r.b = CVector::Constant(1, value);
  r.c = CVector::Ones(1);
  return r;
}

DescriptorRealization realize_variable(int j, int d) {
  if (j < 1 || j > d) throw Error(ErrorCode::Dimension, "variable index out of range");
  std::vector<CMatrix> mats(static_cast<std::size_t>(d), CMatrix::Zero(2, 2));
  mats[static_cast<std::size_t>(j - 1)](0, 1) = 1.0;
  DescriptorRealization r;
  r.A = MatTuple(std::move(mats));
  r.b = CVector::Unit(2, 1);
  r.c = CVector::Unit(2, 0);
  return r;
}

DescriptorRealization realization_sum(const DescriptorRealization& f, const DescriptorRealization& g) {
  require_same_d(f, g);
  DescriptorRealization r;
  r.A = block_tuple(f.A, {}, g.A);
  r.b = stack(f.b, g.b);
  r.c = stack(f.c, g.c);
  return r;
}

DescriptorRealization realization_product(const DescriptorRealization& f, const DescriptorRealization& g) {
  require_same_d(f, g);
  // Coupling b_f c_g^* feeds the output of g's state into f's input.
  const CMatrix coupling = f.b * g.c.adjoint();
  std::vector<CMatrix> top_right;
  for (int j = 0; j < f.d(); ++j) top_right.push_back(coupling * g.A[j]);
  DescriptorRealization r;
  r.A = block_tuple(f.A, top_right, g.A);
  r.b = stack(coupling * g.b, g.b);
  r.c = stack(f.c, CVector::Zero(g.state_dim()));
  return r;
}

DescriptorRealization realization_scale(Complex factor, const DescriptorRealization& f) {
  DescriptorRealization r = f;
  r.b = factor * f.b;
  return r;
}

DescriptorRealization realization_inverse(const DescriptorRealization& f) {
  const Complex alpha = f.c.dot(f.b);  // c^* b
  if (std::abs(alpha) <= 1e-12 * (1.0 + f.b.norm() * f.c.norm()))
    throw Error(ErrorCode::NotAdmissible, "function vanishes at the origin, so its inverse has no realization there");
  const Complex ainv = 1.0 / alpha;
  // FM form f = alpha + c^*(I - Sum X_j A_j)^{-1} Sum X_j (A_j b); its inverse
  // has state matrices A_j - (A_j b) alpha^{-1} c^*, a rank-one perturbation.
  FMRealization inv;
  std::vector<CMatrix> mats;
  for (int j = 0; j < f.d(); ++j) {
    const CVector bj = f.A[j] * f.b;
    mats.push_back(f.A[j] - bj * ainv * f.c.adjoint());
    inv.B.push_back(bj * ainv);
  }
  inv.A = MatTuple(std::move(mats));
  inv.c = -std::conj(ainv) * f.c;
  inv.d0 = ainv;
  return fm_to_descriptor(inv);
}

DescriptorRealization realize(const ExprPtr& e, int d) {
  switch (e->kind) {
    case ExprKind::Const: return realize_constant(e->value, d);
    case ExprKind::Var: return realize_variable(e->index, d);
    case ExprKind::Neg: return realization_scale(-1.0, realize(e->left, d));
    case ExprKind::Scale: return realization_scale(e->value, realize(e->left, d));
    case ExprKind::Add: return realization_sum(realize(e->left, d), realize(e->right, d));
    case ExprKind::Mul: return realization_product(realize(e->left, d), realize(e->right, d));
    case ExprKind::Inv: {
      const DescriptorRealization inner = realize(e->left, d);
      try {
        return realization_inverse(inner);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::NotAdmissible) throw;
        throw Error(ErrorCode::NotAdmissible, "not admissible at the origin: " + to_string(e->left) + " vanishes at 0");
      }
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown expression node");
}

// ---------------------------------------------------------------------------
// Minimality

namespace {

double tuple_scale(const MatTuple& A) {
  double s = 1.0;
  for (const auto& a : A.mats()) s = std::max(s, operator_norm(a));
  return s;
}

DescriptorRealization zero_function(int d) {
  DescriptorRealization r;
  r.A = MatTuple::zeros(d, 1);
  r.b = CVector::Zero(1);
  r.c = CVector::Zero(1);
  return r;
}

DescriptorRealization compress(const DescriptorRealization& R, const CMatrix& V) {
  DescriptorRealization out;
  out.A = R.A.compressed(V);
  out.b = V.adjoint() * R.b;
  out.c = V.adjoint() * R.c;
  return out;
}

}  // namespace

DescriptorRealization minimize_realization(const DescriptorRealization& R) {
  R.validate();
  const double bn = R.b.norm();
  const double cn = R.c.norm();
  if (bn == 0.0 || cn == 0.0) return zero_function(R.d());
  const double scale = tuple_scale(R.A);

  const OrbitBasis reach = invariant_orbit(R.b / bn, R.A.mats(), kMinimalRankTol, scale);
  if (reach.ambiguous()) throw Error(ErrorCode::NumericalDegeneracy, "reachable subspace rank is ambiguous");
  const DescriptorRealization step1 = compress(R, reach.basis);

  const double cn1 = step1.c.norm();
  if (cn1 <= kMinimalRankTol * cn) return zero_function(R.d());
  const MatTuple adj = step1.A.adjoint();
  const OrbitBasis observe = invariant_orbit(step1.c / cn1, adj.mats(), kMinimalRankTol, scale);
  if (observe.ambiguous()) throw Error(ErrorCode::NumericalDegeneracy, "observable subspace rank is ambiguous");
  return compress(step1, observe.basis);
}

DescriptorRealization conjugate_realization(const DescriptorRealization& R, const CMatrix& S) {
  R.validate();
  if (S.rows() != R.state_dim() || S.cols() != R.state_dim())
    throw Error(ErrorCode::Dimension, "gauge matrix must match the state dimension");
  const CMatrix Sinv = S.partialPivLu().inverse();
  DescriptorRealization out;
  out.A = R.A.conjugated(S, Sinv);
  out.b = Sinv * R.b;
  out.c = S.adjoint() * R.c;
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void require_point(int d, const MatTuple& X) {
  if (X.d() != d) {
    std::ostringstream os;
    os << "point has d=" << X.d() << " but the realization has d=" << d;
    throw Error(ErrorCode::Dimension, os.str());
  }
}

CMatrix resolvent_or_throw(const MatTuple& X, const MatTuple& A) {
  PencilResolvent res = pencil_resolvent(X, A);
  if (res.singular) {
    std::ostringstream os;
    os << "point is outside the domain (pencil sigma_min = " << res.sigma_min << ")";
    throw OutsideDomainError(res.sigma_min, os.str());
  }
  return std::move(res.inverse);
}

}  // namespace

CMatrix eval_descriptor(const DescriptorRealization& R, const MatTuple& X) {
  R.validate();
  require_point(R.d(), X);
  const CMatrix inv = resolvent_or_throw(X, R.A);
  const CMatrix id = CMatrix::Identity(X.n(), X.n());
  return kron(id, R.c).adjoint() * inv * kron(id, R.b);
}

CMatrix eval_fm(const FMRealization& F, const MatTuple& X) {
  F.validate();
  require_point(F.d(), X);
  const CMatrix inv = resolvent_or_throw(X, F.A);
  const int n = X.n();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix input = CMatrix::Zero(static_cast<Eigen::Index>(n) * F.state_dim(), n);
  for (int j = 0; j < F.d(); ++j) input += kron(X[j], F.B[static_cast<std::size_t>(j)]);
  return F.d0 * id + kron(id, F.c).adjoint() * inv * input;
}

DescriptorRealization fm_to_descriptor(const FMRealization& F) {
  F.validate();
  const int m = F.state_dim();
  std::vector<CMatrix> mats;
  for (int j = 0; j < F.d(); ++j) {
    CMatrix a = CMatrix::Zero(m + 1, m + 1);
    a.bottomLeftCorner(m, 1) = F.B[static_cast<std::size_t>(j)];
    a.bottomRightCorner(m, m) = F.A[j];
    mats.push_back(std::move(a));
  }
  DescriptorRealization r;
  r.A = MatTuple(std::move(mats));
  r.b = CVector::Unit(m + 1, 0);
  r.c = stack(CVector::Constant(1, std::conj(F.d0)), F.c);
  return r;
}

FMRealization descriptor_to_fm(const DescriptorRealization& R) {
  R.validate();
  FMRealization F;
  F.A = R.A;
  for (int j = 0; j < R.d(); ++j) F.B.push_back(R.A[j] * R.b);
  F.c = R.c;
  F.d0 = R.c.dot(R.b);
  return F;
}

ColligationCheck fm_colligation_check(const FMRealization& F) {
  F.validate();
  const int m = F.state_dim();
  ColligationCheck out;
  out.V = CMatrix::Zero(m + 1, m + 1);
  out.V(0, 0) = F.d0;
  out.V.block(0, 1, 1, m) = F.c.adjoint();
  for (int j = 0; j < F.d(); ++j) {
    out.V.block(1, 0, m, 1) += F.B[static_cast<std::size_t>(j)];
    out.V.block(1, 1, m, m) += F.A[j];
  }
  out.defect = operator_norm(out.V.adjoint() * out.V - CMatrix::Identity(m + 1, m + 1));
  out.unitary = out.defect <= kColligationTol;
  return out;
}

double domain_sigma_min(const DescriptorRealization& R, const MatTuple& X) {
  R.validate();
  require_point(R.d(), X);
  return smallest_singular_value(pencil_matrix(X, R.A));
}

bool domain_contains(const DescriptorRealization& R, const MatTuple& X) {
  R.validate();
  require_point(R.d(), X);
  return !pencil_resolvent(X, R.A).singular;
}

DomainBallCertificate domain_ball_certificate(const DescriptorRealization& R, const OpSpaceSpec& space,
                                              const RadiusOptions& opts) {
  R.validate();
  if (space.d() != R.d()) throw Error(ErrorCode::Dimension, "space and realization disagree on d");
  DomainBallCertificate cert;
  cert.dual_space = dual_spec(space);
  bool all_zero = true;
  for (const auto& a : R.A.mats()) all_zero = all_zero && a.isZero(0.0);
  const double inf = std::numeric_limits<double>::infinity();
  if (all_zero) {
    cert.unbounded = true;
    cert.inclusion_radius = cert.exclusion_radius = inf;
    cert.dual_radius.method = cert.dual_radius.lower_method = cert.dual_radius.upper_method = "zero-pencil";
    return cert;
  }
  cert.dual_radius = rho_estimate(cert.dual_space, R.A, opts);
  cert.inclusion_radius = cert.dual_radius.upper > 0.0 ? 1.0 / cert.dual_radius.upper : inf;
  cert.exclusion_radius = cert.dual_radius.lower > 0.0 ? 1.0 / cert.dual_radius.lower : inf;
  cert.unbounded = !std::isfinite(cert.inclusion_radius);
  return cert;
}

std::vector<CMatrix> homogeneous_components(const DescriptorRealization& R, const MatTuple& X, int N) {
  R.validate();
  require_point(R.d(), X);
  if (N < 0) throw Error(ErrorCode::Config, "series order must be >= 0");
  const int n = X.n();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix out_map = kron(id, R.c).adjoint();
  CMatrix M = CMatrix::Zero(static_cast<Eigen::Index>(n) * R.state_dim(), static_cast<Eigen::Index>(n) * R.state_dim());
  for (int j = 0; j < R.d(); ++j) M += kron(X[j], R.A[j]);
  std::vector<CMatrix> comps;
  CMatrix P = kron(id, R.b);
  for (int k = 0; k <= N; ++k) {
    comps.push_back(out_map * P);
    if (k < N) P = M * P;
  }
  return comps;
}

CMatrix truncated_series_eval(const DescriptorRealization& R, const MatTuple& X, int N) {
  const auto comps = homogeneous_components(R, X, N);
  CMatrix sum = CMatrix::Zero(X.n(), X.n());
  for (const auto& c : comps) sum += c;
  return sum;
}

}  // namespace ncball
