#include "ncball/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "ncball/decomposition.hpp"
#include "ncball/matcore.hpp"
#include "ncball/random.hpp"
#include "ncball/specrad.hpp"

namespace ncball {

void OptimConfig::validate() const {
  if (restarts < 1) throw Error(ErrorCode::Config, "restarts must be >= 1");
  if (max_iters < 0) throw Error(ErrorCode::Config, "max_iters must be >= 0");
  if (!(tol > 0.0)) throw Error(ErrorCode::Config, "tol must be positive");
  if (!(step_init > 0.0)) throw Error(ErrorCode::Config, "step_init must be positive");
  if (random_directions < 0) throw Error(ErrorCode::Config, "random_directions must be >= 0");
  if (!(max_condition > 1.0)) throw Error(ErrorCode::Config, "max_condition must exceed 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RestartResult {
  bool ok = false;
  double value = kInf;
  CMatrix S0;
  CMatrix G;
  int iters = 0;
  std::vector<double> trace;
};

class ConjugatedObjective {
 public:
  ConjugatedObjective(const TupleObjective& f, MatTuple Y, double max_condition)
      : f_(f), Y_(std::move(Y)), g_bound_(0.5 * std::log(max_condition)) {}

  double operator()(const CMatrix& G) const {
    if (G.norm() > g_bound_) return kInf;
    const CMatrix E = G.exp();
    const CMatrix Ei = (-G).exp();
    if (!all_finite(E) || !all_finite(Ei)) return kInf;
    std::vector<CMatrix> mats;
    mats.reserve(static_cast<std::size_t>(Y_.d()));
    for (const auto& y : Y_.mats()) {
      CMatrix z = Ei * y * E;
      if (!all_finite(z)) return kInf;
      mats.push_back(std::move(z));
    }
    const double v = f_(MatTuple(std::move(mats)));
    return std::isfinite(v) ? v : kInf;
  }

 private:
  const TupleObjective& f_;
  MatTuple Y_;
  double g_bound_;
};

// Accepted moves must beat rounding noise, so scaled copies of a tuple follow
// the same search path.
bool better(double candidate, double current) { return candidate < current * (1.0 - 1e-12); }

CMatrix random_direction(int n, Rng& rng) {
  CMatrix D = random_complex_matrix(n, n, rng);
  return D / D.norm();
}

RestartResult run_restart(const TupleObjective& objective, const MatTuple& X, const CMatrix& S0, CMatrix G,
                          const OptimConfig& cfg, Rng& rng) {
  RestartResult res;
  res.S0 = S0;
  const Eigen::PartialPivLU<CMatrix> lu(S0);
  const CMatrix S0inv = lu.inverse();
  if (!all_finite(S0inv)) return res;
  const ConjugatedObjective eval(objective, X.conjugated(S0, S0inv), cfg.max_condition);

  const int n = X.n();
  double f = eval(G);
  for (int shrink = 0; shrink < 40 && !std::isfinite(f); ++shrink) {
    G *= 0.5;
    f = eval(G);
  }
  if (!std::isfinite(f)) return res;

  const int coords = 2 * n * n;
  double step = cfg.step_init;
  int first = 0;  // poll starts at the last successful direction
  int iters = 0;
  while (iters < cfg.max_iters && step >= cfg.tol && f >= cfg.stop_below) {
    ++iters;
    bool improved = false;
    for (int t = 0; t < 2 * coords && !improved; ++t) {
      const int dir = (first + t) % (2 * coords);
      const int k = dir / 2;
      const double sign = (dir % 2 == 0) ? 1.0 : -1.0;
      const int entry = k / 2;
      const Complex unit = (k % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
      CMatrix Gt = G;
      Gt(entry % n, entry / n) += sign * step * unit;
      const double ft = eval(Gt);
      if (better(ft, f)) {
        f = ft;
        G = std::move(Gt);
        first = dir;
        improved = true;
      }
    }
    for (int r = 0; r < cfg.random_directions && !improved; ++r) {
      const CMatrix D = random_direction(n, rng);
      for (double sign : {1.0, -1.0}) {
        CMatrix Gt = G + sign * step * D;
        const double ft = eval(Gt);
        if (better(ft, f)) {
          f = ft;
          G = std::move(Gt);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
    res.trace.push_back(f);
  }
  res.ok = true;
  res.value = f;
  res.G = std::move(G);
  res.iters = iters;
  return res;
}

}  // namespace

SimilarityWitness minimize_conjugated_objective(const TupleObjective& objective, const MatTuple& X,
                                                const OptimConfig& cfg, const std::vector<CMatrix>& starts) {
  cfg.validate();
  const int n = X.n();
  const CMatrix base = starts.empty() ? CMatrix::Identity(n, n) : starts.front();

  RestartResult best;
  int best_index = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(r)}));
    CMatrix S0;
    CMatrix G0 = CMatrix::Zero(n, n);
    if (static_cast<std::size_t>(r) < starts.size()) {
      S0 = starts[static_cast<std::size_t>(r)];
    } else {
      S0 = base;
      G0 = 0.3 * random_complex_matrix(n, n, rng);
    }
    RestartResult res = run_restart(objective, X, S0, std::move(G0), cfg, rng);
    if (res.ok && (best_index < 0 || res.value < best.value)) {
      best = std::move(res);
      best_index = r;
    }
  }
  if (best_index < 0) throw Error(ErrorCode::Optimization, "every restart produced a non-finite objective");

  SimilarityWitness w;
  w.S = best.S0 * best.G.exp();
  const CMatrix Sinv = Eigen::PartialPivLU<CMatrix>(w.S).inverse();
  w.achieved_norm = objective(X.conjugated(w.S, Sinv));
  w.condition_number = condition_number(w.S);
  w.iterations = best.iters;
  w.seed = cfg.seed;
  w.restart = best_index;
  w.trace = std::move(best.trace);
  return w;
}

CMatrix graded_scaling(const CMatrix& basis, const std::vector<int>& block_sizes, double eps) {
  const Eigen::Index n = basis.cols();
  CMatrix D = CMatrix::Zero(n, n);
  Eigen::Index offset = 0;
  double g = 1.0;
  for (int b : block_sizes) {
    for (int i = 0; i < b; ++i) D(offset + i, offset + i) = g;
    offset += b;
    g *= eps;
  }
  return basis * D;
}

CMatrix schur_scaling_warmstart(const MatTuple& X, double eps) {
  const int n = X.n();
  bool upper = true;
  for (const auto& x : X.mats()) {
    for (int c = 0; c < n && upper; ++c)
      for (int r = c + 1; r < n; ++r)
        if (x(r, c) != Complex(0.0)) {
          upper = false;
          break;
        }
  }
  if (upper) return graded_scaling(CMatrix::Identity(n, n), std::vector<int>(static_cast<std::size_t>(n), 1), eps);
  if (X.d() == 1) {
    Eigen::ComplexSchur<CMatrix> schur(X[0]);
    return graded_scaling(schur.matrixU(), std::vector<int>(static_cast<std::size_t>(n), 1), eps);
  }
  const DecompositionResult dec = holder_jordan(X);
  return graded_scaling(dec.basis, dec.block_sizes, eps);
}

CMatrix stein_similarity(const MatTuple& X, double t, bool column) {
  const int n = X.n();
  const CMatrix phi = transfer_matrix(X, column);
  const Eigen::Index n2 = phi.rows();
  const CMatrix lhs = CMatrix::Identity(n2, n2) - phi / (t * t);
  const CMatrix id = CMatrix::Identity(n, n);
  const CVector rhs = Eigen::Map<const CVector>(id.data(), id.size());
  const Eigen::FullPivLU<CMatrix> lu(lhs);
  if (!lu.isInvertible()) return {};
  const CVector p = lu.solve(rhs);
  CMatrix P = Eigen::Map<const CMatrix>(p.data(), n, n);
  P = 0.5 * (P + P.adjoint()).eval();
  if (!all_finite(P)) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(P);
  const auto& ev = es.eigenvalues();
  if (!(ev(0) > 0.0)) return {};
  const Eigen::VectorXd root = column ? ev.cwiseSqrt().cwiseInverse().eval() : ev.cwiseSqrt().eval();
  return es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

SimilarityWitness minimize_conjugated_norm(const OpSpaceSpec& spec, const MatTuple& X, const OptimConfig& cfg) {
  cfg.validate();
  if (spec.d() != X.d()) throw Error(ErrorCode::Dimension, "space and tuple disagree on d");
  const TupleObjective objective = [&spec](const MatTuple& Y) { return space_norm_upper(spec, Y); };
  const int n = X.n();

  std::vector<CMatrix> candidates;
  if (cfg.warm_start) {
    try {
      candidates.push_back(schur_scaling_warmstart(X));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalDegeneracy) throw;
    }
    if (spec.kind() == SpaceKind::Row || spec.kind() == SpaceKind::Column) {
      const bool column = spec.kind() == SpaceKind::Column;
      const double rho = column ? rho_column_exact(X).upper : rho_row_exact(X).upper;
      const double scale = space_norm_upper(spec, X);
      const double t = std::max(rho * 1.001, 1e-3 * scale);
      if (t > 0.0) {
        CMatrix S = stein_similarity(X, t, column);
        if (S.size() > 0) candidates.push_back(std::move(S));
      }
    }
  }
  // The better warm start seeds restart 0; random restarts perturb it.
  std::vector<CMatrix> starts;
  if (!candidates.empty()) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const CMatrix Sinv = Eigen::PartialPivLU<CMatrix>(candidates[i]).inverse();
      if (!all_finite(Sinv)) continue;
      const double v = objective(X.conjugated(candidates[i], Sinv));
      if (v < best) {
        best = v;
        pick = i;
      }
    }
    starts.push_back(candidates[pick]);
  } else {
    starts.push_back(CMatrix::Identity(n, n));
  }
  return minimize_conjugated_objective(objective, X, cfg, starts);
}

}  // namespace ncball
