#include <doctest.h>

#include "ncball/casestudy.hpp"
#include "oracles.hpp"

using namespace ncball;
using oracle::Mat;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ncball::Error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("famous matrices") {
  const FamousExample ex = build_famous();
  const oracle::Mats A = oracle::famous_A();
  CHECK(ex.descriptor.A[0] == A[0]);
  CHECK(ex.descriptor.A[1] == A[1]);
  CHECK(ex.descriptor.b(0) == Complex(-1.0 / std::sqrt(2.0)));
  CHECK(ex.descriptor.c == CVector::Unit(3, 2));
  // A_j = v_j e_j^*
  CHECK((A[0] - ex.v1 * CVector::Unit(3, 0).adjoint()).norm() == 0.0);
  CHECK((A[1] - ex.v2 * CVector::Unit(3, 1).adjoint()).norm() == 0.0);
  // A_1 A_2 = -1/2 v_1 e_2^*
  CHECK((A[0] * A[1] + 0.5 * ex.v1 * CVector::Unit(3, 1).adjoint()).norm() < 1e-15);
  CHECK(famous_scalar_value(0.5, 0.5) == Complex(-0.5));
}

TEST_CASE("word products") {
  CHECK(word_power_check(1) == 0.0);
  CHECK(word_power_check(2) <= 1e-15);
  CHECK(word_power_check(10) <= 1e-12);
  CHECK(code_of([] { word_power_check(0); }) == ErrorCode::Config);
  CHECK(code_of([] { word_power_check(21); }) == ErrorCode::Config);
}

TEST_CASE("word sums have norm one") {
  const oracle::Mats A = oracle::famous_A();
  const Mat S = A[0] + A[1];
  Mat P = S;
  for (int n = 2; n <= 14; ++n) {
    P = P * S;  // (A_1 + A_2)^n is the sum over all words of length n
    CHECK(word_sum_norm(n) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(word_sum_norm(n) == doctest::Approx(oracle::norm2(P)).epsilon(1e-10));
  }
  // The word sum is 2^{n-2} times four rank-one terms with weights 2^{-(n-1)}:
  // (1/2) [v_1 - v_2, v_2 - v_1, 0], whose norm is 1.
  const FamousExample ex = build_famous();
  Mat expected = Mat::Zero(3, 3);
  expected.col(0) = 0.5 * (ex.v1 - ex.v2);
  expected.col(1) = 0.5 * (ex.v2 - ex.v1);
  Mat W = Mat::Zero(3, 3);
  oracle::words(A, 6, [&](const std::vector<int>&, const Mat& p) { W += p; });
  CHECK((W - expected).norm() < 1e-12);
  CHECK(code_of([] { word_sum_norm(1); }) == ErrorCode::Config);
}

TEST_CASE("diamond bounds") {
  const RadiusEstimate b16 = diamond_radius_bounds(16);
  CHECK(b16.lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b16.upper == doctest::Approx(std::pow(2.0, 1.0 / 16)).epsilon(1e-12));
  const RadiusEstimate b2 = diamond_radius_bounds(2);
  CHECK(b2.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b2.upper == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  double prev = 2.0;
  for (int n = 2; n <= 10; ++n) {
    const double u = diamond_radius_bounds(n).upper;
    CHECK(u < prev);
    prev = u;
  }
  CHECK(b16.diagnostics.count("haagerup_sampled_order_16") == 1);
  CHECK(code_of([] { diamond_radius_bounds(1); }) == ErrorCode::Config);
}

TEST_CASE("T sums: recursion against brute force") {
  oracle::Gen g(91);
  for (int n = 2; n <= 6; ++n) {
    std::vector<std::pair<CMatrix, CMatrix>> sigma;
    for (int k = 0; k < n; ++k) sigma.emplace_back(g.mat(2, 2), g.mat(2, 2));
    for (int j = 1; j <= 2; ++j) {
      // T_{j,n} = s_1(f1+f2) ... s_{n-1}(f1+f2) s_n(f_j)
      Mat rec = j == 1 ? sigma.back().first : sigma.back().second;
      for (int k = n - 2; k >= 0; --k) rec = (sigma[k].first + sigma[k].second) * rec;
      CHECK((lemma_T_words(sigma, j) - rec).norm() < 1e-10 * (1 + rec.norm()));
      const Mat sum = lemma_T_words_first(sigma, 1, j) + lemma_T_words_first(sigma, 2, j);
      CHECK((sum - rec).norm() < 1e-10 * (1 + rec.norm()));
    }
  }
  std::vector<std::pair<CMatrix, CMatrix>> one{{Mat::Identity(1, 1), Mat::Identity(1, 1)}};
  CHECK(code_of([&] { lemma_T_words_first(one, 1, 1); }) == ErrorCode::InvalidInput);
  // The scalar pair (1, 1) fails the validity test and gives 2^{n-1}.
  std::vector<std::pair<CMatrix, CMatrix>> ones(5, {Mat::Identity(1, 1), Mat::Identity(1, 1)});
  CHECK(lemma_T_words(ones, 1)(0, 0) == Complex(16.0));
}

TEST_CASE("T sums stay contractive") {
  const LemmaCheckResult one = lemma_T_check(1, 20);
  CHECK(one.max_violation <= 1e-9);
  const LemmaCheckResult eight = lemma_T_check(8, 200);
  CHECK(eight.max_violation <= 1e-9);
  CHECK(eight.trials == 200);
  CHECK(eight.rejected == 0);
  CHECK(eight.max_norm > 0.9);  // unitary diagonal samples reach the boundary
  CHECK(lemma_T_check(4, 10, {1, 3}).max_violation <= 1e-9);
  CHECK(code_of([] { lemma_T_check(13, 1); }) == ErrorCode::Config);
  CHECK(code_of([] { lemma_T_check(2, 0); }) == ErrorCode::Config);
}

TEST_CASE("polydisc radius") {
  RadiusOptions o;
  o.witness = false;
  const RadiusEstimate e = polydisc_radius_value(o);
  CHECK(e.lower <= 0.5 + 1e-12);
  CHECK(e.upper >= 0.5 - 1e-12);
  CHECK(e.width() <= 1e-6);
}
