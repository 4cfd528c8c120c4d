#include <doctest.h>

#include "ncball/specrad.hpp"
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

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat jordan() {
  Mat J(2, 2);
  J << 1, 1, 0, 1;
  return J;
}

RadiusOptions quick() {
  RadiusOptions o;
  o.optim.restarts = 2;
  o.optim.max_iters = 300;
  return o;
}

}  // namespace

TEST_CASE("exact row and column radii") {
  const MatTuple D({diag2(0.6, 0), diag2(0, 0.8)});
  CHECK(rho_row_exact(D).upper == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(rho_column_exact(D).lower == doctest::Approx(0.8).epsilon(1e-12));
  // n = 20 truncation of the defining limit stabilises at 0.8
  CHECK(oracle::row_power(D.mats(), 20) == doctest::Approx(0.8).epsilon(1e-12));
  const RadiusEstimate j = rho_row_exact(MatTuple({jordan()}));
  CHECK(j.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.width() <= 1e-12);
  CHECK(rho_row_exact(MatTuple::zeros(2, 3)).upper == 0.0);
}

TEST_CASE("row radius matches the vec transfer oracle and the column radius of the adjoint") {
  oracle::Gen g(51);
  for (int t = 0; t < 15; ++t) {
    const oracle::Mats raw = g.tuple(2 + t % 2, 2 + t % 3);
    const double expected = oracle::row_radius_vec(raw);
    const RadiusEstimate r = rho_row_exact(MatTuple(raw));
    CHECK(r.lower == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.upper == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rho_column_exact(MatTuple(oracle::adjoint(raw))).upper == doctest::Approx(r.upper).epsilon(1e-9));
    // The finite-order row norm is an upper bound at every order.
    CHECK(oracle::row_power(raw, 6) >= r.upper - 1e-9);
  }
}

TEST_CASE("Rota-Strang bounds") {
  const MatTuple A(oracle::famous_A());
  const RadiusEstimate rs = rho_rs_bounds(A, 12);
  CHECK(rs.lower == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rs.upper <= std::pow(2.0, -11.0 / 12.0) + 1e-12);
  CHECK(rs.upper >= 0.5);
  CHECK(rs.truncation_order.value() == 12);
  CHECK(rho_rs_bounds(MatTuple::zeros(2, 2), 4).upper == 0.0);

  // Normalised 2x2 matrices: the bracket around the classical radius is tight.
  oracle::Gen g(52);
  for (int t = 0; t < 10; ++t) {
    Mat m = g.mat(2, 2);
    m /= oracle::norm2(m);
    const RadiusEstimate e = rho_rs_bounds(MatTuple({m}), 12);
    const double rho = oracle::spectral_radius(m);
    CHECK(e.lower <= rho + 1e-12);
    CHECK(e.upper >= rho - 1e-12);
  }
  CHECK(code_of([&] { rho_rs_bounds(A, 0); }) == ErrorCode::Config);
  CHECK(code_of([&] { rho_rs_bounds(A, kMaxWordOrder + 1); }) == ErrorCode::Config);
  CHECK(code_of([] { rho_rs_bounds(MatTuple::zeros(5, 1), 10); }) == ErrorCode::Config);
}

TEST_CASE("min-tensor truncation") {
  const MatTuple D({diag2(0.6, 0), diag2(0, 0.8)});
  const MatTuple row_q = OpSpaceSpec::row(2).pencil_presentation().value();
  const MatTuple poly_q = OpSpaceSpec::min_linf(2).pencil_presentation().value();
  CHECK(rho_min_truncated(row_q, D, 10) == doctest::Approx(0.8).epsilon(1e-9));
  const MatTuple A(oracle::famous_A());
  CHECK(rho_min_truncated(poly_q, A, 10) == doctest::Approx(std::pow(2.0, -0.9)).epsilon(1e-10));
  CHECK(rho_min_truncated(poly_q, MatTuple::zeros(2, 2), 3) == 0.0);
  CHECK(code_of([&] { rho_min_truncated(poly_q, A, 15); }) == ErrorCode::Resource);
  CHECK(code_of([&] { rho_min_truncated(poly_q, A, 0); }) == ErrorCode::Config);
  CHECK(code_of([&] { rho_min_truncated(MatTuple::scalars({1.0}), A, 2); }) == ErrorCode::Dimension);

  // Dense Kronecker oracle at order 3.
  oracle::Gen g(53);
  const oracle::Mats X = g.tuple(2, 2), Q = g.tuple(2, 2);
  Mat sum = Mat::Zero(2 * 8, 2 * 8);
  oracle::words(X, 3, [&](const std::vector<int>& w, const Mat& p) {
    sum += oracle::kron(p, oracle::kron(Q[w[0]], oracle::kron(Q[w[1]], Q[w[2]])));
  });
  CHECK(rho_min_truncated(MatTuple(Q), MatTuple(X), 3) ==
        doctest::Approx(std::pow(oracle::norm2(sum), 1.0 / 3)).epsilon(1e-10));
}

TEST_CASE("sampled substitution values") {
  const MatTuple A(oracle::famous_A());
  CHECK(rho_haagerup_lower_sampled(OpSpaceSpec::max_l1(2), A, 10) >= 1.0 - 1e-12);
  const MatTuple poly_q = OpSpaceSpec::min_linf(2).pencil_presentation().value();
  CHECK(rho_haagerup_lower_sampled(OpSpaceSpec::min_linf(2), A, 6) >= rho_min_truncated(poly_q, A, 6) - 1e-12);
  CHECK(rho_haagerup_lower_sampled(OpSpaceSpec::max_l1(2), MatTuple::zeros(2, 2), 4) == 0.0);
  CHECK(code_of([&] { rho_haagerup_lower_sampled(OpSpaceSpec::row(2), A, 4); }) == ErrorCode::UnsupportedVariant);
}

TEST_CASE("estimates on the famous tuple") {
  const MatTuple A(oracle::famous_A());
  const RadiusEstimate poly = rho_estimate(OpSpaceSpec::min_linf(2), A, quick());
  CHECK(poly.lower == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(poly.width() <= 1e-6);
  CHECK(poly.components.size() == 3);
  CHECK_FALSE(poly.method.empty());
  const RadiusEstimate diamond = rho_estimate(OpSpaceSpec::max_l1(2), A, quick());
  CHECK(diamond.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diamond.upper == doctest::Approx(1.0).epsilon(1e-9));
  // Haagerup dominates min: rho_RS <= polydisc radius.
  CHECK(rho_rs_bounds(A, 8).lower <= poly.upper + 1e-12);
}

TEST_CASE("Jordan block has radius one and no contractive witness") {
  const RadiusEstimate e = rho_estimate(OpSpaceSpec::row(1), MatTuple({jordan()}), quick());
  CHECK(e.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.upper == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(e.witness.has_value());
  CHECK(e.witness->achieved_norm > 1.0);
}

TEST_CASE("estimates bracket exact radii and witnesses are honest") {
  oracle::Gen g(54);
  for (int t = 0; t < 6; ++t) {
    const oracle::Mats raw = g.tuple(2, 3);
    const MatTuple X(raw);
    for (const OpSpaceSpec& spec : {OpSpaceSpec::row(2), OpSpaceSpec::min_linf(2), OpSpaceSpec::max_l1(2)}) {
      const RadiusEstimate e = rho_estimate(spec, X, quick());
      CHECK(e.lower <= e.upper + 1e-12);
      REQUIRE(e.witness.has_value());
      const MatTuple Y(oracle::conjugate(raw, e.witness->S));
      CHECK(e.upper <= space_norm_upper(spec, Y) * (1 + 1e-9) + 1e-12);
      // Ordering: the min-tensor value at order n is below the n-th root of the witness norm^n.
      if (auto Q = spec.pencil_presentation())
        CHECK(rho_min_truncated(*Q, Y, 4) <= space_norm_upper(spec, Y) + 1e-9);
    }
    const double exact = oracle::row_radius_vec(raw);
    const RadiusEstimate row = rho_estimate(OpSpaceSpec::row(2), X, quick());
    CHECK(row.lower == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("certified lower bounds never exceed the exact row radius") {
  oracle::Gen g(55);
  for (int t = 0; t < 8; ++t) {
    const oracle::Mats raw = g.tuple(2, 2);
    std::string method;
    const double lb = certified_lower_bound(OpSpaceSpec::min_linf(2), MatTuple(raw), quick(), &method);
    // rho over min(l^inf) is at most max_j ||X_j||.
    CHECK(lb <= std::max(oracle::norm2(raw[0]), oracle::norm2(raw[1])) + 1e-12);
    CHECK_FALSE(method.empty());
  }
}

TEST_CASE("decisions") {
  const MatTuple A(oracle::famous_A());
  const Decision yes = decide_similarity_to_ball(OpSpaceSpec::min_linf(2), A.scaled(0.9), quick());
  CHECK(yes.verdict == Verdict::Yes);
  REQUIRE(yes.estimate.witness.has_value());
  const MatTuple Y = A.scaled(0.9).conjugated(yes.estimate.witness->S);
  CHECK(std::max(oracle::norm2(Y[0]), oracle::norm2(Y[1])) < 1.0);

  const Decision boundary = decide_similarity_to_ball(OpSpaceSpec::row(1), MatTuple({jordan()}), quick());
  CHECK(boundary.verdict == Verdict::Boundary);

  const Decision no = decide_similarity_to_ball(OpSpaceSpec::min_linf(2), MatTuple::scalars({2.0, 0.0}), quick());
  CHECK(no.verdict == Verdict::No);
  CHECK(no.estimate.lower == doctest::Approx(2.0));
  CHECK(std::string(verdict_name(Verdict::Boundary)) == "boundary");
  CHECK(code_of([&] { rho_estimate(OpSpaceSpec::row(3), A); }) == ErrorCode::Dimension);
}
