#ifndef NCBALL_CASESTUDY_HPP
#define NCBALL_CASESTUDY_HPP

#include <cstdint>
#include <string>

#include "ncball/realization.hpp"
#include "ncball/specrad.hpp"

namespace ncball {

/// The two-variable function f(z, w) = (2zw - z - w) / (2 - z - w), bounded
/// on the bidisc and singular at (1, 1), with its 3x3 descriptor realization
/// and its unitary-colligation FM realization.
struct FamousExample {
  DescriptorRealization descriptor;
  FMRealization fm;
  CVector v1;
  CVector v2;
  /// Expression text of the scalar formula.
  static constexpr const char* kFormula = "(2*x1*x2 - x1 - x2) * inv(2 - x1 - x2)";
};

FamousExample build_famous();

/// Value of the scalar formula at (z, w).
Complex famous_scalar_value(Complex z, Complex w);

/// Max entrywise defect between A^w and 2^{-(n-1)} (-1)^{m(w)} v_{w_1} e_{w_n}^*
/// over all 2^n words, m(w) counting letter changes. 1 <= n <= 20.
double word_power_check(int n);

/// ||Sum_{|w|=n} A^w||, which equals 1 for every n >= 2. 2 <= n <= 20.
double word_sum_norm(int n);

/// Bounds for the max(l^1) radius of A at order n: lower from the plain word
/// sum (a unitary substitution) and upper (Sum_w ||A^w||)^{1/n} = 2^{1/n}.
/// The sampled unitary word-sum value is stored as a diagnostic.
RadiusEstimate diamond_radius_bounds(int n, const NormOptions& opts = {});

struct LemmaCheckOptions {
  int dim = 3;                 // size of the sampled contractions
  std::uint64_t seed = 0;
};

struct LemmaCheckResult {
  double max_violation = 0.0;  // max over trials of (largest norm - 1)
  double max_norm = 0.0;
  int trials = 0;
  int rejected = 0;            // samples that failed the validity test
};

/// Samples substitutions s_i (pairs C_1, C_2 with ||C_1 +- C_2|| <= 1) and
/// evaluates T_{j,n} = s_1(f_1+f_2) ... s_{n-1}(f_1+f_2) s_n(f_j) and
/// T_{1,j,n} +- T_{2,j,n} by the first-slot recursion. 1 <= n <= 12.
LemmaCheckResult lemma_T_check(int n, int trials, const LemmaCheckOptions& opts = {});

/// Brute-force word-sum evaluation of T_{j,n} and T_{i,j,n} for given
/// substitution pairs (sigma[k] = (C_1, C_2) of slot k+1); used as an oracle.
CMatrix lemma_T_words(const std::vector<std::pair<CMatrix, CMatrix>>& sigma, int j);
CMatrix lemma_T_words_first(const std::vector<std::pair<CMatrix, CMatrix>>& sigma, int i, int j);

/// Radius of A in the polydisc space; exact through the 1x1 block-triangular
/// components.
RadiusEstimate polydisc_radius_value(const RadiusOptions& opts = {});

}  // namespace ncball

#endif  // NCBALL_CASESTUDY_HPP
