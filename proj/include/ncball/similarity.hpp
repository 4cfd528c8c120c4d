#ifndef NCBALL_SIMILARITY_HPP
#define NCBALL_SIMILARITY_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "ncball/opspace.hpp"
#include "ncball/types.hpp"

namespace ncball {

struct SimilarityWitness {
  CMatrix S;
  double achieved_norm = 0.0;  // ||S^{-1} X S|| recomputed from S
  double condition_number = 1.0;
  int iterations = 0;          // pattern-search iterations of the winning restart
  std::uint64_t seed = 0;
  int restart = 0;             // index of the winning restart
  std::vector<double> trace;   // objective after every iteration of the winning restart
};

struct OptimConfig {
  int restarts = 8;
  int max_iters = 2000;
  double step_init = 0.5;
  double tol = 1e-7;           // stop once the step falls below this
  std::uint64_t seed = 0;
  bool warm_start = true;
  int random_directions = 4;   // extra seeded poll directions per iteration
  /// Bound on cond(exp(G)) relative to the start, enforced through
  /// 2 ||G||_F <= log(max_condition).
  double max_condition = 1e8;
  /// Stop a restart as soon as the objective drops below this value.
  double stop_below = -std::numeric_limits<double>::infinity();

  void validate() const;
};

/// Objective on the conjugated tuple S^{-1} X S. Must return a certified
/// upper bound for the norm being minimised (or +inf).
using TupleObjective = std::function<double(const MatTuple&)>;

/// Multi-start pattern search on S = S_0 exp(G) for the given objective.
/// `starts` supplies S_0 for the leading restarts (the first one is polled
/// from G = 0); the remaining restarts perturb the first start with seeded
/// random G. Throws Optimization when every restart fails.
SimilarityWitness minimize_conjugated_objective(const TupleObjective& objective, const MatTuple& X,
                                                const OptimConfig& cfg, const std::vector<CMatrix>& starts);

/// Minimises ||S^{-1} X S|| in the norm of `spec` (the triangle-inequality
/// upper bound for MaxL1). Warm starts: the graded triangularisation below,
/// and for Row/Column additionally the solution of the Stein-type equation
/// that certifies the exact radius.
SimilarityWitness minimize_conjugated_norm(const OpSpaceSpec& spec, const MatTuple& X,
                                           const OptimConfig& cfg = {});

/// Default grading ratio of the warm start.
inline constexpr double kWarmStartGrading = 0.1;

/// Triangularising basis (identity when X is already upper triangular, Schur
/// for d = 1, block-triangular basis otherwise) times the graded scaling
/// that multiplies block i by eps^i.
CMatrix schur_scaling_warmstart(const MatTuple& X, double eps = kWarmStartGrading);

/// Graded similarity of the block-triangular basis `basis` with diagonal
/// blocks of the given sizes, block i scaled by eps^i.
CMatrix graded_scaling(const CMatrix& basis, const std::vector<int>& block_sizes, double eps);

/// S with ||S^{-1} X S||_{row or column} <= t, built from the series
/// Sum_k t^{-2k} Phi^k(I); requires t above the exact radius. Empty when the
/// linear system is singular.
CMatrix stein_similarity(const MatTuple& X, double t, bool column);

}  // namespace ncball

#endif  // NCBALL_SIMILARITY_HPP
