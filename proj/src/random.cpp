#include "ncball/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace ncball {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t idx : indices) h = splitmix64(h ^ splitmix64(idx + 0x632be59bd9b4e019ULL));
  return h;
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

double Rng::normal() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::numbers::sqrt2;
}

Complex Rng::phase() {
  const double t = uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, t);
}

CMatrix random_complex_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
  return m;
}

CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix g = random_complex_matrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex rk = r(k, k);
    const double a = std::abs(rk);
    if (a > 0.0) q.col(k) *= rk / a;
  }
  return q;
}

MatTuple random_tuple(int d, int n, Rng& rng) {
  std::vector<CMatrix> mats;
  for (int j = 0; j < d; ++j) mats.push_back(random_complex_matrix(n, n, rng));
  return MatTuple(std::move(mats));
}

}  // namespace ncball
