#include "ncball/specrad.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ncball/decomposition.hpp"
#include "ncball/matcore.hpp"
#include "ncball/random.hpp"

namespace ncball {

namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double root(double value, int n) { return value <= 0.0 ? 0.0 : std::pow(value, 1.0 / n); }

bool is_zero(const MatTuple& X) {
  for (const auto& x : X.mats())
    if (!x.isZero(0.0)) return false;
  return true;
}

double exact_radius_of(const MatTuple& X, bool column) {
  if (X.n() == 1) {
    double s = 0.0;
    for (const auto& x : X.mats()) s += std::norm(x(0, 0));
    return std::sqrt(s);
  }
  return std::sqrt(spectral_radius_classical(transfer_matrix(X, column)));
}

RadiusEstimate exact_radius(const MatTuple& X, bool column) {
  double value = 0.0;
  RadiusEstimate est;
  try {
    const DecompositionResult dec = holder_jordan(X);
    for (const auto& comp : dec.components) {
      const double v = exact_radius_of(comp, column);
      est.components.push_back({comp.n(), v, v});
      value = std::max(value, v);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NumericalDegeneracy) throw;
    value = exact_radius_of(X, column);
    est.components = {{X.n(), value, value}};
  }
  est.lower = est.upper = value;
  est.method = est.lower_method = est.upper_method = "cp-eigenvalue";
  return est;
}

std::uint64_t word_count(int d, int n_max) {
  std::uint64_t total = 0;
  std::uint64_t layer = 1;
  for (int k = 1; k <= n_max; ++k) {
    if (layer > kMaxWordCount) return kMaxWordCount + 1;
    layer *= static_cast<std::uint64_t>(d);
    total += layer;
    if (total > kMaxWordCount) return kMaxWordCount + 1;
  }
  return total;
}

// max over words of length <= order of rho(X^w)^{1/|w|}, with the length attaining it.
std::pair<double, int> max_word_spectral(const MatTuple& X, int order) {
  double best = 0.0;
  int at = 1;
  for (int len = 1; len <= order; ++len) {
    for_each_word(X, len, [&](std::span<const int>, const CMatrix& p) {
      const double v = root(spectral_radius_classical(p), len);
      if (v > best) {
        best = v;
        at = len;
      }
    });
  }
  return {best, at};
}

int affordable_order(int d, int wanted, std::uint64_t budget) {
  int order = std::max(1, wanted);
  while (order > 1 && word_count(d, order) > budget) --order;
  return order;
}

// T = L_1 ... L_n acting on C^m (x) (C^h)^{(x)n}; L_i carries Q_j in slot i.
class SlotPencil {
 public:
  SlotPencil(const MatTuple& X, const MatTuple& Q, int n) : X_(X), Q_(Q), n_(n), m_(X.n()), h_(Q.n()) {
    size_ = m_;
    for (int i = 0; i < n_; ++i) size_ *= h_;
  }

  Eigen::Index size() const { return size_; }

  CVector apply(const CVector& v) const {
    CVector cur = v;
    for (int i = n_; i >= 1; --i) cur = apply_slot(i, cur, false);
    return cur;
  }

  CVector apply_adjoint(const CVector& v) const {
    CVector cur = v;
    for (int i = 1; i <= n_; ++i) cur = apply_slot(i, cur, true);
    return cur;
  }

 private:
  CVector apply_slot(int i, const CVector& v, bool adjoint) const {
    Eigen::Index P = 1;
    for (int k = 1; k < i; ++k) P *= h_;
    const Eigen::Index R = size_ / (static_cast<Eigen::Index>(m_) * P * h_);
    CVector out = CVector::Zero(size_);
    CVector w(size_);
    for (int j = 0; j < X_.d(); ++j) {
      const CMatrix q = adjoint ? CMatrix(Q_[j].adjoint()) : Q_[j];
      const CMatrix x = adjoint ? CMatrix(X_[j].adjoint()) : X_[j];
      for (Eigen::Index xp = 0; xp < m_ * P; ++xp) {
        const Eigen::Index base = xp * h_ * R;
        Eigen::Map<const RowMajor> in(v.data() + base, h_, R);
        Eigen::Map<RowMajor> dst(w.data() + base, h_, R);
        dst.noalias() = q * in;
      }
      Eigen::Map<const RowMajor> W(w.data(), m_, size_ / m_);
      Eigen::Map<RowMajor> O(out.data(), m_, size_ / m_);
      O.noalias() += x * W;
    }
    return out;
  }

  const MatTuple& X_;
  const MatTuple& Q_;
  int n_;
  int m_;
  int h_;
  Eigen::Index size_;
};

// Largest singular value of a matrix-free operator: dense for small sizes,
// otherwise Lanczos with full reorthogonalisation on T^*T, restarted from the
// best Ritz vector.
template <class Apply, class ApplyAdj>
double top_singular_value(Eigen::Index N, Apply apply, ApplyAdj apply_adj) {
  if (N <= 256) {
    CMatrix T(N, N);
    CVector e = CVector::Zero(N);
    for (Eigen::Index c = 0; c < N; ++c) {
      e(c) = 1.0;
      T.col(c) = apply(e);
      e(c) = 0.0;
    }
    return operator_norm(T);
  }
  Rng rng(0x5eedULL);
  CVector start(N);
  for (Eigen::Index i = 0; i < N; ++i) start(i) = rng.complex_normal();
  const int kmax = static_cast<int>(std::min<Eigen::Index>(N, 60));
  double theta = 0.0;
  for (int cycle = 0; cycle < 8; ++cycle) {
    std::vector<CVector> basis;
    std::vector<double> alpha, beta;
    basis.push_back(start / start.norm());
    bool converged = false;
    Eigen::VectorXd ritz;
    for (int k = 0; k < kmax; ++k) {
      CVector w = apply_adj(apply(basis[static_cast<std::size_t>(k)]));
      const double a = basis[static_cast<std::size_t>(k)].dot(w).real();
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w -= q * q.dot(w);
      const double b = w.norm();
      const int len = k + 1;
      Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(len, len);
      for (int i = 0; i < len; ++i) {
        Tm(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < len) Tm(i, i + 1) = Tm(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
      theta = es.eigenvalues()(len - 1);
      ritz = es.eigenvectors().col(len - 1);
      const double resid = b * std::abs(ritz(len - 1));
      if (resid <= 1e-14 * std::max(theta, 1e-300) || b <= 1e-300 || len == N) {
        converged = true;
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
    if (converged) break;
    CVector next = CVector::Zero(N);
    for (Eigen::Index i = 0; i < ritz.size(); ++i) next += ritz(i) * basis[static_cast<std::size_t>(i)];
    start = next;
  }
  return std::sqrt(std::max(theta, 0.0));
}

double max_word_norm(const MatTuple& X, int n) {
  double best = 0.0;
  for_each_word(X, n, [&](std::span<const int>, const CMatrix& p) { best = std::max(best, operator_norm(p)); });
  return best;
}

// Random point of the l^1 unit sphere with uniform phases.
std::vector<Complex> l1_sphere_point(int d, Rng& rng) {
  std::vector<Complex> z(static_cast<std::size_t>(d));
  double total = 0.0;
  for (int j = 0; j < d; ++j) {
    const double e = -std::log(1.0 - rng.uniform());
    z[static_cast<std::size_t>(j)] = e * rng.phase();
    total += e;
  }
  for (auto& v : z) v /= total;
  return z;
}

CMatrix scalar_combination(const MatTuple& X, const std::vector<Complex>& z) {
  CMatrix out = CMatrix::Zero(X.n(), X.n());
  for (int j = 0; j < X.d(); ++j) out += z[static_cast<std::size_t>(j)] * X[j];
  return out;
}

CMatrix unitary_combination(const MatTuple& X, const std::vector<CMatrix>& U) {
  const Eigen::Index D = U.front().rows();
  CMatrix out = CMatrix::Zero(X.n() * D, X.n() * D);
  for (int j = 0; j < X.d(); ++j) out += kron(X[j], U[static_cast<std::size_t>(j)]);
  return out;
}

std::uint64_t seed_of(std::uint64_t base, std::uint64_t a, std::uint64_t b) { return derive_seed(base, {a, b}); }

}  // namespace

RadiusEstimate rho_row_exact(const MatTuple& X) { return exact_radius(X, false); }
RadiusEstimate rho_column_exact(const MatTuple& X) { return exact_radius(X, true); }

RadiusEstimate rho_rs_bounds(const MatTuple& X, int n_max) {
  if (n_max < 1 || n_max > kMaxWordOrder)
    throw Error(ErrorCode::Config, "n_max must lie in 1.." + std::to_string(kMaxWordOrder));
  if (word_count(X.d(), n_max) > kMaxWordCount)
    throw Error(ErrorCode::Config, "too many words for n_max=" + std::to_string(n_max));
  RadiusEstimate est;
  est.method = est.lower_method = est.upper_method = "rs-bounds";
  est.truncation_order = n_max;
  double upper = std::numeric_limits<double>::infinity();
  double lower = 0.0;
  for (int len = 1; len <= n_max; ++len) {
    double norm_max = 0.0;
    for_each_word(X, len, [&](std::span<const int>, const CMatrix& p) {
      norm_max = std::max(norm_max, operator_norm(p));
      lower = std::max(lower, root(spectral_radius_classical(p), len));
    });
    upper = std::min(upper, root(norm_max, len));
  }
  est.upper = upper;
  est.lower = std::min(lower, upper);
  return est;
}

double rho_min_truncated(const MatTuple& Q, const MatTuple& X, int n) {
  if (n < 1) throw Error(ErrorCode::Config, "truncation order must be >= 1");
  if (Q.d() != X.d()) throw Error(ErrorCode::Dimension, "pencil and tuple disagree on d");
  std::uint64_t size = static_cast<std::uint64_t>(X.n());
  for (int i = 0; i < n; ++i) {
    size *= static_cast<std::uint64_t>(Q.n());
    if (size > kMinTensorGuard)
      throw Error(ErrorCode::Resource, "min-tensor word sum exceeds the size guard (m*h^n > 50000)");
  }
  if (is_zero(X)) return 0.0;
  const SlotPencil T(X, Q, n);
  const double norm = top_singular_value(
      T.size(), [&](const CVector& v) { return T.apply(v); },
      [&](const CVector& v) { return T.apply_adjoint(v); });
  return root(norm, n);
}

double rho_haagerup_lower_sampled(const OpSpaceSpec& spec, const MatTuple& X, int n, const NormOptions& opts) {
  if (spec.d() != X.d()) throw Error(ErrorCode::Dimension, "space and tuple disagree on d");
  if (spec.kind() != SpaceKind::MinLinf && spec.kind() != SpaceKind::MaxL1)
    throw Error(ErrorCode::UnsupportedVariant, "sampled Haagerup bound needs a MinLinf or MaxL1 space");
  if (n < 1) throw Error(ErrorCode::Config, "order must be >= 1");
  if (opts.samples < 1 || opts.unitary_dim < 1) throw Error(ErrorCode::Config, "sampling options must be >= 1");
  if (is_zero(X)) return 0.0;

  double best = 0.0;
  if (spec.kind() == SpaceKind::MinLinf) {
    // Min-tensor substitution: slot i carries E_jj in the i-th tensor factor,
    // so the word sum is block diagonal with blocks X^w.
    if (word_count(X.d(), n) > kMaxWordCount)
      throw Error(ErrorCode::Resource, "word count guard exceeded for the min-tensor substitution");
    best = root(max_word_norm(X, n), n);
    // Commuting diagonal substitutions decouple into scalar ones.
    for (int k = 0; k < opts.samples; ++k) {
      for (int dim = 0; dim < opts.unitary_dim; ++dim) {
        Rng rng(seed_of(opts.seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(dim)));
        CMatrix prod = CMatrix::Identity(X.n(), X.n());
        for (int i = 0; i < n; ++i) prod = prod * scalar_combination(X, l1_sphere_point(X.d(), rng));
        best = std::max(best, root(operator_norm(prod), n));
      }
    }
    return best;
  }
  CMatrix total = CMatrix::Zero(X.n(), X.n());
  for (const auto& x : X.mats()) total += x;
  CMatrix prod = CMatrix::Identity(X.n(), X.n());
  for (int i = 0; i < n; ++i) prod = prod * total;
  best = root(operator_norm(prod), n);
  for (int k = 0; k < opts.samples; ++k) {
    for (int dim = 1; dim <= opts.unitary_dim; ++dim) {
      Rng rng(seed_of(opts.seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(dim)));
      CMatrix p = CMatrix::Identity(static_cast<Eigen::Index>(X.n()) * dim, static_cast<Eigen::Index>(X.n()) * dim);
      for (int i = 0; i < n; ++i) {
        std::vector<CMatrix> U;
        for (int j = 0; j < X.d(); ++j) U.push_back(haar_unitary(dim, rng));
        p = p * unitary_combination(X, U);
      }
      best = std::max(best, root(operator_norm(p), n));
    }
  }
  return best;
}

double certified_lower_bound(const OpSpaceSpec& spec, const MatTuple& X, const RadiusOptions& opts,
                             std::string* method, int* order) {
  if (spec.d() != X.d()) throw Error(ErrorCode::Dimension, "space and tuple disagree on d");
  double best = 0.0;
  std::string label = "zero";
  auto offer = [&](double v, const char* what) {
    if (v > best) {
      best = v;
      label = what;
    }
  };
  switch (spec.kind()) {
    case SpaceKind::Row:
      offer(rho_row_exact(X).lower, "cp-eigenvalue");
      break;
    case SpaceKind::Column:
      offer(rho_column_exact(X).lower, "cp-eigenvalue");
      break;
    case SpaceKind::ConcretePencil:
      offer(spectral_radius_classical(apply_pencil(X, spec.Q())), "pencil-spectral");
      break;
    case SpaceKind::MinLinf:
    case SpaceKind::MaxL1: {
      const int L = affordable_order(X.d(), opts.word_order, std::uint64_t{1} << 16);
      const auto [wv, wlen] = max_word_spectral(X, L);
      offer(wv, "word-spectral");
      if (order && label == "word-spectral") *order = L;
      const int samples = opts.sampling.samples;
      if (spec.kind() == SpaceKind::MinLinf) {
        for (int k = 0; k < samples * 4; ++k) {
          Rng rng(seed_of(opts.sampling.seed, 0x11ULL, static_cast<std::uint64_t>(k)));
          offer(spectral_radius_classical(scalar_combination(X, l1_sphere_point(X.d(), rng))),
                "substitution-spectral");
        }
      } else {
        std::vector<Complex> ones(static_cast<std::size_t>(X.d()), 1.0);
        offer(spectral_radius_classical(scalar_combination(X, ones)), "substitution-spectral");
        const int max_dim = std::min(opts.sampling.unitary_dim, 4);
        for (int k = 0; k < samples; ++k) {
          for (int dim = 1; dim <= max_dim; ++dim) {
            Rng rng(seed_of(opts.sampling.seed, 0x22ULL + static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(dim)));
            std::vector<CMatrix> U;
            for (int j = 0; j < X.d(); ++j) U.push_back(haar_unitary(dim, rng));
            offer(spectral_radius_classical(unitary_combination(X, U)), "substitution-spectral");
          }
        }
      }
      break;
    }
  }
  if (method) *method = label;
  return best;
}

RadiusEstimate rho_estimate(const OpSpaceSpec& spec, const MatTuple& X, const RadiusOptions& opts) {
  if (spec.d() != X.d()) throw Error(ErrorCode::Dimension, "space and tuple disagree on d");
  opts.optim.validate();
  const SpaceKind kind = spec.kind();

  auto add_diagnostics = [&](RadiusEstimate& est) {
    if (!opts.diagnostics) return;
    if (const auto pencil = spec.pencil_presentation()) {
      try {
        est.diagnostics["min_tensor_order_" + std::to_string(opts.n)] = rho_min_truncated(*pencil, X, opts.n);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Resource) throw;
      }
    }
    if (kind == SpaceKind::MinLinf || kind == SpaceKind::MaxL1) {
      try {
        est.diagnostics["haagerup_sampled_order_" + std::to_string(opts.n)] =
            rho_haagerup_lower_sampled(spec, X, opts.n, opts.sampling);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Resource) throw;
      }
    }
  };

  if (kind == SpaceKind::Row || kind == SpaceKind::Column) {
    RadiusEstimate est = kind == SpaceKind::Row ? rho_row_exact(X) : rho_column_exact(X);
    if (opts.witness) est.witness = minimize_conjugated_norm(spec, X, opts.optim);
    add_diagnostics(est);
    return est;
  }

  DecompositionResult dec;
  try {
    dec = holder_jordan(X, opts.sampling.seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NumericalDegeneracy) throw;
    dec.basis = CMatrix::Identity(X.n(), X.n());
    dec.components = {X};
    dec.block_sizes = {X.n()};
    dec.triangular = X;
  }

  RadiusEstimate est;
  est.method = "holder-jordan";
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_method = "zero";
  std::string upper_method = "zero";
  std::vector<CMatrix> comp_S;
  for (const auto& comp : dec.components) {
    RadiusEstimate::Component c;
    c.size = comp.n();
    std::string lm;
    std::string um;
    CMatrix S;
    if (comp.n() == 1) {
      c.lower = c.upper = space_norm_upper(spec, comp);
      lm = um = "scalar-component";
      S = CMatrix::Identity(1, 1);
    } else {
      int order = 0;
      c.lower = certified_lower_bound(spec, comp, opts, &lm, &order);
      if (lm == "word-spectral") est.truncation_order = order;
      const SimilarityWitness w = minimize_conjugated_norm(spec, comp, opts.optim);
      c.upper = w.achieved_norm;
      um = "conjugated-norm";
      S = w.S;
    }
    if (c.lower > lower) {
      lower = c.lower;
      lower_method = lm;
    }
    if (c.upper > upper) {
      upper = c.upper;
      upper_method = um;
    }
    est.components.push_back(c);
    comp_S.push_back(std::move(S));
  }

  if (opts.witness) {
    const int n = X.n();
    CMatrix inner = CMatrix::Zero(n, n);
    int offset = 0;
    for (std::size_t i = 0; i < comp_S.size(); ++i) {
      const int b = dec.block_sizes[i];
      inner.block(offset, offset, b, b) = comp_S[i];
      offset += b;
    }
    const CMatrix base = dec.basis * inner;
    const std::vector<int> sizes = dec.block_sizes;
    const TupleObjective objective = [&spec, sizes, kind](const MatTuple& Y) {
      if (kind == SpaceKind::MaxL1) return max_l1_block_upper(Y, sizes);
      return space_norm_upper(spec, Y);
    };
    CMatrix start = base;
    double start_val = std::numeric_limits<double>::infinity();
    for (double eps = 1e-1; eps >= 1e-6 * 0.999; eps *= 0.1) {
      const CMatrix S = graded_scaling(base, sizes, eps);
      const double v = objective(X.conjugated(S));
      if (v < start_val) {
        start_val = v;
        start = S;
      }
    }
    OptimConfig polish = opts.optim;
    polish.restarts = 1;
    if (dec.components.size() == 1) polish.max_iters = 0;
    est.witness = minimize_conjugated_objective(objective, X, polish, {start});
    if (est.witness->achieved_norm < upper) {
      upper = est.witness->achieved_norm;
      upper_method = "global-witness";
    }
  }
  est.lower = std::min(lower, upper);
  est.upper = upper;
  est.lower_method = lower_method;
  est.upper_method = upper_method;
  add_diagnostics(est);
  return est;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Boundary: return "boundary";
  }
  return "boundary";
}

Decision decide_similarity_to_ball(const OpSpaceSpec& spec, const MatTuple& X, const RadiusOptions& opts) {
  RadiusOptions o = opts;
  o.witness = true;
  Decision d;
  d.estimate = rho_estimate(spec, X, o);
  const RadiusEstimate& est = d.estimate;
  if (est.upper < 1.0 - o.margin) {
    if (est.witness && est.witness->achieved_norm < 1.0) {
      d.verdict = Verdict::Yes;
      d.reason = "radius upper bound below 1 and witness norm below 1";
    } else {
      d.verdict = Verdict::Boundary;
      d.reason = "radius upper bound below 1 but no witness certifies it";
    }
  } else if (est.lower > 1.0 + o.margin) {
    d.verdict = Verdict::No;
    d.reason = "certified radius lower bound above 1";
  } else {
    d.verdict = Verdict::Boundary;
    d.reason = "radius interval meets the decision band around 1";
  }
  return d;
}

}  // namespace ncball
