#ifndef NCBALL_RANDOM_HPP
#define NCBALL_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "ncball/types.hpp"

namespace ncball {

/// Deterministic sub-stream seed: mixes a base seed with stream indices
/// (splitmix64 finalizer), so sample k of a family never depends on how many
/// other samples were drawn.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  Complex complex_normal();
  /// Uniform on the unit circle.
  Complex phase();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

CMatrix random_complex_matrix(int rows, int cols, Rng& rng);
/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix haar_unitary(int n, Rng& rng);
MatTuple random_tuple(int d, int n, Rng& rng);

}  // namespace ncball

#endif  // NCBALL_RANDOM_HPP
