#ifndef NCBALL_SPECRAD_HPP
#define NCBALL_SPECRAD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncball/opspace.hpp"
#include "ncball/similarity.hpp"
#include "ncball/types.hpp"

namespace ncball {

/// Interval [lower, upper] for a spectral radius with the provenance of each
/// endpoint. When a witness is present, upper <= witness->achieved_norm.
struct RadiusEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  std::string lower_method;
  std::string upper_method;
  std::optional<int> truncation_order;
  std::optional<SimilarityWitness> witness;
  /// Uncertified side values (finite-order word-sum norms and the like).
  std::map<std::string, double> diagnostics;
  /// Per Hölder-Jordan component: (size, lower, upper).
  struct Component {
    int size = 0;
    double lower = 0.0;
    double upper = 0.0;
  };
  std::vector<Component> components;

  double width() const { return upper - lower; }
};

/// Exact row radius lim ||Sum_{|w|=n} X^w X^w*||^{1/2n}, as the square root of
/// the spectral radius of Y -> Sum_j X_j Y X_j^*. Evaluated per block-triangular
/// component (1x1 components in closed form), which keeps defective cases
/// such as Jordan blocks accurate.
RadiusEstimate rho_row_exact(const MatTuple& X);
/// Column analogue with Y -> Sum_j X_j^* Y X_j.
RadiusEstimate rho_column_exact(const MatTuple& X);

inline constexpr int kMaxWordOrder = 16;
/// Upper limit on the number of words enumerated by the word-based bounds.
inline constexpr std::uint64_t kMaxWordCount = std::uint64_t{1} << 22;

/// Rota-Strang bounds: upper = min_{n <= n_max} max_{|w|=n} ||X^w||^{1/n},
/// lower = max_{|w| <= n_max} rho(X^w)^{1/|w|}.
RadiusEstimate rho_rs_bounds(const MatTuple& X, int n_max);

/// Memory guard m * h^n for the min-tensor word sum.
inline constexpr std::uint64_t kMinTensorGuard = 50000;

/// ||Sum_{|w|=n} X^w (x) Q_{w_1} (x) ... (x) Q_{w_n}||^{1/n}, evaluated
/// matrix-free as the product of n slot-wise pencils.
double rho_min_truncated(const MatTuple& Q, const MatTuple& X, int n);

/// max over sampled completely contractive substitutions of
/// ||Sum_{|w|=n} X^w (x) s_1(f_{w_1}) ... s_n(f_{w_n})||^{1/n}.
/// MinLinf: commuting diagonal substitutions (points of the l^1 sphere) plus
/// the min-tensor substitution. MaxL1: Haar unitaries plus the scalar tuple.
double rho_haagerup_lower_sampled(const OpSpaceSpec& spec, const MatTuple& X, int n,
                                  const NormOptions& opts = {});

struct RadiusOptions {
  int n = 6;                   // order of the diagnostic word sums
  int word_order = 10;         // longest word used by the word lower bound
  NormOptions sampling;        // substitution sampling
  OptimConfig optim;
  bool witness = true;
  bool diagnostics = true;
  double margin = 1e-6;        // decision band around 1
};

/// Certified lower bound: spectral radii of completely contractive
/// substitutions (and, for MinLinf/MaxL1, max_w rho(X^w)^{1/|w|}).
/// `method` receives a label for the winning bound.
double certified_lower_bound(const OpSpaceSpec& spec, const MatTuple& X, const RadiusOptions& opts,
                             std::string* method = nullptr, int* order = nullptr);

/// Certified interval for the radius of X in the operator space `spec`,
/// combined over the Hölder-Jordan components by the max rule, with a global
/// similarity witness.
RadiusEstimate rho_estimate(const OpSpaceSpec& spec, const MatTuple& X, const RadiusOptions& opts = {});

enum class Verdict { Yes, No, Boundary };
const char* verdict_name(Verdict v);

struct Decision {
  Verdict verdict = Verdict::Boundary;
  RadiusEstimate estimate;
  std::string reason;
};

/// Yes (with a witness S, ||S^{-1}XS|| < 1) when upper < 1 - margin and the
/// witness certifies it, No when lower > 1 + margin, Boundary otherwise.
Decision decide_similarity_to_ball(const OpSpaceSpec& spec, const MatTuple& X, const RadiusOptions& opts = {});

}  // namespace ncball

#endif  // NCBALL_SPECRAD_HPP
