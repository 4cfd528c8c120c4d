#ifndef NCBALL_OPSPACE_HPP
#define NCBALL_OPSPACE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncball/types.hpp"

namespace ncball {

enum class SpaceKind { Row, Column, MinLinf, MaxL1, ConcretePencil };

const char* space_kind_name(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& name);

/// An operator space structure on C^d.
///
/// Row and Column are the row/column Hilbert spaces, MinLinf is min(l^inf_d)
/// (the nc polydisc), MaxL1 is max(l^1_d) (the nc diamond, realised through
/// free unitaries) and ConcretePencil is span{Q_1, ..., Q_d} inside M_h.
class OpSpaceSpec {
 public:
  static OpSpaceSpec row(int d);
  static OpSpaceSpec column(int d);
  static OpSpaceSpec min_linf(int d);
  static OpSpaceSpec max_l1(int d);
  /// Throws InvalidInput unless Q_1..Q_d are linearly independent.
  static OpSpaceSpec pencil(MatTuple Q);

  SpaceKind kind() const noexcept { return kind_; }
  int d() const noexcept { return d_; }
  /// Defined only for ConcretePencil.
  const MatTuple& Q() const;

  /// A concrete pencil presenting the same ball, where one exists
  /// (Row: E_{1j}, Column: E_{j1}, MinLinf: E_{jj}, ConcretePencil: Q).
  std::optional<MatTuple> pencil_presentation() const;

  std::string describe() const;

 private:
  OpSpaceSpec(SpaceKind kind, int d) : kind_(kind), d_(d) {}
  SpaceKind kind_;
  int d_;
  std::optional<MatTuple> q_;
};

/// Rank threshold used for the linear independence check on pencils.
inline constexpr double kPencilRankTol = 1e-10;

struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  std::string method;
  std::optional<std::uint64_t> seed;
};

struct NormOptions {
  int samples = 16;       // random unitary tuples per dimension (MaxL1)
  int unitary_dim = 8;    // largest unitary dimension (MaxL1)
  std::uint64_t seed = 0;
};

/// ||X||_{M_n(E)}. Exact except for MaxL1, where the lower bound comes from
/// substituting unitary tuples (the all-ones scalar tuple, and `samples` Haar
/// tuples of every dimension 1..unitary_dim, each drawn from its own seeded
/// stream so that sample sets are nested) and the upper bound is
/// Sum_j ||X_j||.
NormEstimate space_norm(const OpSpaceSpec& spec, const MatTuple& X, const NormOptions& opts = {});

/// Exact norm for the variants that have one; MaxL1 returns the triangle
/// inequality bound. Used as an optimisation objective.
double space_norm_upper(const OpSpaceSpec& spec, const MatTuple& X);

/// Certified MaxL1 upper bound that exploits a block partition of the state
/// space: max over diagonal blocks of Sum_j ||block||, plus Sum_j ||off-block
/// part||; never worse than Sum_j ||X_j||.
double max_l1_block_upper(const MatTuple& X, std::span<const int> block_sizes);

/// ||Sum_j X_j (x) U_j|| for a tuple of unitaries (or any substitution).
double substitution_norm(const MatTuple& X, const std::vector<CMatrix>& U);

enum class Containment { Inside, Outside, Unknown };
const char* containment_name(Containment c);

/// Boundary band for ball membership.
inline constexpr double kBallBand = 1e-10;

/// Whether X lies in the open ball of radius r: Inside when the upper norm
/// bound is below r - band, Outside when the lower bound exceeds r + band.
Containment ball_contains(const OpSpaceSpec& spec, const MatTuple& X, double r,
                          const NormOptions& opts = {});

/// Operator space dual: Row <-> Column, MinLinf <-> MaxL1.
OpSpaceSpec dual_spec(const OpSpaceSpec& spec);

}  // namespace ncball

#endif  // NCBALL_OPSPACE_HPP
