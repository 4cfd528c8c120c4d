#include "ncball/casestudy.hpp"

#include <cmath>
#include <numbers>

#include "ncball/matcore.hpp"
#include "ncball/random.hpp"

namespace ncball {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

const FamousExample& famous() {
  static const FamousExample ex = build_famous();
  return ex;
}

void require_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw Error(ErrorCode::Config, std::string(what) + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
}

}  // namespace

FamousExample build_famous() {
  FamousExample ex;
  ex.v1 = CVector(3);
  ex.v1 << 0.5, -0.5, kInvSqrt2;
  ex.v2 = CVector(3);
  ex.v2 << -0.5, 0.5, kInvSqrt2;
  const CMatrix A1 = ex.v1 * CVector::Unit(3, 0).adjoint();
  const CMatrix A2 = ex.v2 * CVector::Unit(3, 1).adjoint();
  ex.descriptor.A = MatTuple({A1, A2});
  ex.descriptor.b = CVector(3);
  ex.descriptor.b << -kInvSqrt2, -kInvSqrt2, 0.0;
  ex.descriptor.c = CVector::Unit(3, 2);

  // f = -B diag(Z,W) (I - D diag(Z,W))^{-1} C, rewritten with the variables on
  // the left of each Kronecker factor: A_j = E_jj D, b_j = E_jj C, c = -B^*.
  CMatrix D(2, 2);
  D << 0.5, -0.5, -0.5, 0.5;
  CMatrix E1 = CMatrix::Zero(2, 2);
  CMatrix E2 = CMatrix::Zero(2, 2);
  E1(0, 0) = 1.0;
  E2(1, 1) = 1.0;
  CVector C(2);
  C << kInvSqrt2, kInvSqrt2;
  ex.fm.A = MatTuple({E1 * D, E2 * D});
  ex.fm.B = {E1 * C, E2 * C};
  ex.fm.c = -C;
  ex.fm.d0 = 0.0;
  return ex;
}

Complex famous_scalar_value(Complex z, Complex w) { return (2.0 * z * w - z - w) / (2.0 - z - w); }

double word_power_check(int n) {
  require_range(n, 1, 20, "word length");
  const FamousExample& ex = famous();
  const double scale = std::ldexp(1.0, -(n - 1));
  double defect = 0.0;
  for_each_word(ex.descriptor.A, n, [&](std::span<const int> w, const CMatrix& p) {
    int changes = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) changes += w[i] != w[i + 1];
    const CVector& v = w.front() == 0 ? ex.v1 : ex.v2;
    const CMatrix expected = ((changes % 2 == 0) ? scale : -scale) * v * CVector::Unit(3, w.back()).adjoint();
    defect = std::max(defect, (p - expected).cwiseAbs().maxCoeff());
  });
  return defect;
}

double word_sum_norm(int n) {
  require_range(n, 2, 20, "word length");
  CMatrix sum = CMatrix::Zero(3, 3);
  for_each_word(famous().descriptor.A, n, [&](std::span<const int>, const CMatrix& p) { sum += p; });
  return operator_norm(sum);
}

RadiusEstimate diamond_radius_bounds(int n, const NormOptions& opts) {
  require_range(n, 2, 20, "word length");
  const MatTuple& A = famous().descriptor.A;
  double total = 0.0;
  for_each_word(A, n, [&](std::span<const int>, const CMatrix& p) { total += operator_norm(p); });
  RadiusEstimate est;
  est.method = "diamond-word-bounds";
  est.lower_method = "scalar-unitary-word-sum";
  est.upper_method = "word-norm-sum";
  est.truncation_order = n;
  est.lower = std::pow(word_sum_norm(n), 1.0 / n);
  est.upper = std::pow(total, 1.0 / n);
  est.diagnostics["haagerup_sampled_order_" + std::to_string(n)] =
      rho_haagerup_lower_sampled(OpSpaceSpec::max_l1(2), A, n, opts);
  return est;
}

CMatrix lemma_T_words(const std::vector<std::pair<CMatrix, CMatrix>>& sigma, int j) {
  const int n = static_cast<int>(sigma.size());
  if (n < 1 || (j != 1 && j != 2)) throw Error(ErrorCode::InvalidInput, "need n >= 1 and j in {1,2}");
  const Eigen::Index D = sigma.front().first.rows();
  CMatrix total = CMatrix::Zero(D, D);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    CMatrix p = CMatrix::Identity(D, D);
    for (int k = 0; k < n; ++k) {
      const int letter = k == n - 1 ? j : static_cast<int>((mask >> k) & 1U) + 1;
      const auto& [c1, c2] = sigma[static_cast<std::size_t>(k)];
      p = p * (letter == 1 ? c1 : c2);
    }
    total += p;
  }
  return total;
}

CMatrix lemma_T_words_first(const std::vector<std::pair<CMatrix, CMatrix>>& sigma, int i, int j) {
  const int n = static_cast<int>(sigma.size());
  if (n < 2 || (i != 1 && i != 2)) throw Error(ErrorCode::InvalidInput, "need n >= 2 and i in {1,2}");
  const std::vector<std::pair<CMatrix, CMatrix>> tail(sigma.begin() + 1, sigma.end());
  return (i == 1 ? sigma.front().first : sigma.front().second) * lemma_T_words(tail, j);
}

LemmaCheckResult lemma_T_check(int n, int trials, const LemmaCheckOptions& opts) {
  require_range(n, 1, 12, "n");
  if (trials < 1) throw Error(ErrorCode::Config, "trials must be >= 1");
  if (opts.dim < 1) throw Error(ErrorCode::Config, "dim must be >= 1");
  const int D = opts.dim;
  LemmaCheckResult out;
  out.max_violation = -1.0;
  auto contraction = [&](Rng& rng, bool diagonal) {
    if (diagonal) {
      // Unitary diagonal samples sit on the boundary of the validity test.
      CMatrix m = CMatrix::Zero(D, D);
      for (int k = 0; k < D; ++k) m(k, k) = rng.phase();
      return m;
    }
    CMatrix g = random_complex_matrix(D, D, rng);
    return CMatrix(g / operator_norm(g));
  };
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(t)}));
    const bool diagonal = t % 2 == 1;
    // sigma_k(f_1 + f_2) = P_k and sigma_k(f_1 - f_2) = M_k are contractions.
    std::vector<CMatrix> P, M;
    std::vector<std::pair<CMatrix, CMatrix>> sigma;
    for (int k = 0; k < n; ++k) {
      P.push_back(contraction(rng, diagonal));
      M.push_back(contraction(rng, diagonal));
      sigma.emplace_back(0.5 * (P.back() + M.back()), 0.5 * (P.back() - M.back()));
      const double valid = std::max(operator_norm(sigma.back().first + sigma.back().second),
                                    operator_norm(sigma.back().first - sigma.back().second));
      if (valid > 1.0 + 1e-12) ++out.rejected;
    }
    double worst = 0.0;
    for (int j = 1; j <= 2; ++j) {
      // T_{j,k} for the last k slots, built from the back.
      CMatrix T = j == 1 ? sigma.back().first : sigma.back().second;
      CMatrix prev = T;
      for (int k = n - 2; k >= 0; --k) {
        prev = T;
        T = P[static_cast<std::size_t>(k)] * T;
      }
      worst = std::max(worst, operator_norm(T));
      if (n >= 2) {
        worst = std::max(worst, operator_norm(P.front() * prev));  // T_{1,j,n} + T_{2,j,n}
        worst = std::max(worst, operator_norm(M.front() * prev));  // T_{1,j,n} - T_{2,j,n}
      }
    }
    out.max_norm = std::max(out.max_norm, worst);
    out.max_violation = std::max(out.max_violation, worst - 1.0);
    ++out.trials;
  }
  return out;
}

RadiusEstimate polydisc_radius_value(const RadiusOptions& opts) {
  return rho_estimate(OpSpaceSpec::min_linf(2), famous().descriptor.A, opts);
}

}  // namespace ncball
