#include "ncball/opspace.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/SVD>

#include "ncball/matcore.hpp"
#include "ncball/random.hpp"

namespace ncball {

const char* space_kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Row: return "row";
    case SpaceKind::Column: return "column";
    case SpaceKind::MinLinf: return "minlinf";
    case SpaceKind::MaxL1: return "maxl1";
    case SpaceKind::ConcretePencil: return "pencil";
  }
  return "unknown";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "row") return SpaceKind::Row;
  if (name == "column") return SpaceKind::Column;
  if (name == "minlinf") return SpaceKind::MinLinf;
  if (name == "maxl1") return SpaceKind::MaxL1;
  if (name == "pencil") return SpaceKind::ConcretePencil;
  throw Error(ErrorCode::InvalidInput, "unknown space kind '" + name + "'");
}

namespace {

void require_d(int d) {
  if (d < 1) throw Error(ErrorCode::Dimension, "operator space needs d >= 1");
}

CMatrix unit(int size, int r, int c) {
  CMatrix m = CMatrix::Zero(size, size);
  m(r, c) = 1.0;
  return m;
}

void require_same_d(const OpSpaceSpec& spec, const MatTuple& X) {
  if (spec.d() != X.d()) {
    std::ostringstream os;
    os << "space has d=" << spec.d() << " but tuple has d=" << X.d();
    throw Error(ErrorCode::Dimension, os.str());
  }
}

}  // namespace

OpSpaceSpec OpSpaceSpec::row(int d) { require_d(d); return OpSpaceSpec(SpaceKind::Row, d); }
OpSpaceSpec OpSpaceSpec::column(int d) { require_d(d); return OpSpaceSpec(SpaceKind::Column, d); }
OpSpaceSpec OpSpaceSpec::min_linf(int d) { require_d(d); return OpSpaceSpec(SpaceKind::MinLinf, d); }
OpSpaceSpec OpSpaceSpec::max_l1(int d) { require_d(d); return OpSpaceSpec(SpaceKind::MaxL1, d); }

OpSpaceSpec OpSpaceSpec::pencil(MatTuple Q) {
  if (Q.empty()) throw Error(ErrorCode::Dimension, "pencil needs d >= 1");
  const int h = Q.n();
  CMatrix stacked(Q.d(), static_cast<Eigen::Index>(h) * h);
  for (int j = 0; j < Q.d(); ++j) {
    stacked.row(j) = Eigen::Map<const Eigen::RowVectorXcd>(Q[j].data(), Q[j].size());
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > kPencilRankTol * std::max(1.0, smax)) ++rank;
  if (rank < Q.d()) {
    std::ostringstream os;
    os << "pencil coefficients are linearly dependent (rank " << rank << " < d=" << Q.d() << ")";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  OpSpaceSpec spec(SpaceKind::ConcretePencil, Q.d());
  spec.q_ = std::move(Q);
  return spec;
}

const MatTuple& OpSpaceSpec::Q() const {
  if (!q_) throw Error(ErrorCode::UnsupportedVariant, "space has no stored pencil");
  return *q_;
}

std::optional<MatTuple> OpSpaceSpec::pencil_presentation() const {
  std::vector<CMatrix> q;
  switch (kind_) {
    case SpaceKind::Row:
      for (int j = 0; j < d_; ++j) q.push_back(unit(d_, 0, j));
      return MatTuple(std::move(q));
    case SpaceKind::Column:
      for (int j = 0; j < d_; ++j) q.push_back(unit(d_, j, 0));
      return MatTuple(std::move(q));
    case SpaceKind::MinLinf:
      for (int j = 0; j < d_; ++j) q.push_back(unit(d_, j, j));
      return MatTuple(std::move(q));
    case SpaceKind::ConcretePencil:
      return *q_;
    case SpaceKind::MaxL1:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string OpSpaceSpec::describe() const {
  std::ostringstream os;
  os << space_kind_name(kind_) << "(d=" << d_;
  if (q_) os << ", h=" << q_->n();
  os << ")";
  return os.str();
}

double substitution_norm(const MatTuple& X, const std::vector<CMatrix>& U) {
  const int D = static_cast<int>(U.front().rows());
  const Eigen::Index size = static_cast<Eigen::Index>(X.n()) * D;
  CMatrix sum = CMatrix::Zero(size, size);
  for (int j = 0; j < X.d(); ++j) sum += kron(X[j], U[static_cast<std::size_t>(j)]);
  return operator_norm(sum);
}

namespace {

double row_norm(const MatTuple& X) {
  CMatrix wide(X.n(), static_cast<Eigen::Index>(X.n()) * X.d());
  for (int j = 0; j < X.d(); ++j) wide.middleCols(static_cast<Eigen::Index>(j) * X.n(), X.n()) = X[j];
  return operator_norm(wide);
}

double column_norm(const MatTuple& X) {
  CMatrix tall(static_cast<Eigen::Index>(X.n()) * X.d(), X.n());
  for (int j = 0; j < X.d(); ++j) tall.middleRows(static_cast<Eigen::Index>(j) * X.n(), X.n()) = X[j];
  return operator_norm(tall);
}

double max_norm(const MatTuple& X) {
  double m = 0.0;
  for (const auto& x : X.mats()) m = std::max(m, operator_norm(x));
  return m;
}

double sum_norm(const MatTuple& X) {
  double s = 0.0;
  for (const auto& x : X.mats()) s += operator_norm(x);
  return s;
}

}  // namespace

double space_norm_upper(const OpSpaceSpec& spec, const MatTuple& X) {
  require_same_d(spec, X);
  switch (spec.kind()) {
    case SpaceKind::Row: return row_norm(X);
    case SpaceKind::Column: return column_norm(X);
    case SpaceKind::MinLinf: return max_norm(X);
    case SpaceKind::MaxL1: return sum_norm(X);
    case SpaceKind::ConcretePencil: return operator_norm(apply_pencil(X, spec.Q()));
  }
  return INFINITY;
}

double max_l1_block_upper(const MatTuple& X, std::span<const int> block_sizes) {
  int total = 0;
  for (int b : block_sizes) total += b;
  if (total != X.n()) throw Error(ErrorCode::Dimension, "block sizes do not sum to n");
  double diag_part = 0.0;
  double off_part = 0.0;
  for (int j = 0; j < X.d(); ++j) {
    CMatrix off = X[j];
    int offset = 0;
    for (int b : block_sizes) {
      off.block(offset, offset, b, b).setZero();
      offset += b;
    }
    off_part += operator_norm(off);
  }
  int offset = 0;
  for (int b : block_sizes) {
    double s = 0.0;
    for (int j = 0; j < X.d(); ++j) s += operator_norm(X[j].block(offset, offset, b, b));
    diag_part = std::max(diag_part, s);
    offset += b;
  }
  return std::min(sum_norm(X), diag_part + off_part);
}

NormEstimate space_norm(const OpSpaceSpec& spec, const MatTuple& X, const NormOptions& opts) {
  require_same_d(spec, X);
  NormEstimate est;
  if (spec.kind() != SpaceKind::MaxL1) {
    const double v = space_norm_upper(spec, X);
    est.lower = est.upper = v;
    est.exact = true;
    est.method = std::string("exact-") + space_kind_name(spec.kind());
    return est;
  }
  if (opts.samples < 1) throw Error(ErrorCode::Config, "MaxL1 norm needs samples >= 1");
  if (opts.unitary_dim < 1) throw Error(ErrorCode::Config, "MaxL1 norm needs unitary_dim >= 1");

  // The all-ones scalar tuple.
  CMatrix total = CMatrix::Zero(X.n(), X.n());
  for (const auto& x : X.mats()) total += x;
  double lower = operator_norm(total);
  for (int k = 0; k < opts.samples; ++k) {
    for (int dim = 1; dim <= opts.unitary_dim; ++dim) {
      Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(dim)}));
      std::vector<CMatrix> U;
      for (int j = 0; j < X.d(); ++j) U.push_back(haar_unitary(dim, rng));
      lower = std::max(lower, substitution_norm(X, U));
    }
  }
  est.upper = sum_norm(X);
  est.lower = std::min(lower, est.upper);
  est.exact = false;
  est.method = "maxl1-unitary-sampling";
  est.seed = opts.seed;
  return est;
}

const char* containment_name(Containment c) {
  switch (c) {
    case Containment::Inside: return "inside";
    case Containment::Outside: return "outside";
    case Containment::Unknown: return "unknown";
  }
  return "unknown";
}

Containment ball_contains(const OpSpaceSpec& spec, const MatTuple& X, double r, const NormOptions& opts) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "ball radius must be positive");
  const NormEstimate est = space_norm(spec, X, opts);
  if (est.upper < r - kBallBand) return Containment::Inside;
  if (est.lower > r + kBallBand) return Containment::Outside;
  return Containment::Unknown;
}

OpSpaceSpec dual_spec(const OpSpaceSpec& spec) {
  switch (spec.kind()) {
    case SpaceKind::Row: return OpSpaceSpec::column(spec.d());
    case SpaceKind::Column: return OpSpaceSpec::row(spec.d());
    case SpaceKind::MinLinf: return OpSpaceSpec::max_l1(spec.d());
    case SpaceKind::MaxL1: return OpSpaceSpec::min_linf(spec.d());
    case SpaceKind::ConcretePencil:
      throw Error(ErrorCode::UnsupportedDual, "no finite dual presentation for a concrete pencil");
  }
  throw Error(ErrorCode::UnsupportedDual, "unknown space kind");
}

}  // namespace ncball
