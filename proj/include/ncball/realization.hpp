#ifndef NCBALL_REALIZATION_HPP
#define NCBALL_REALIZATION_HPP

#include <limits>
#include <vector>

#include "ncball/ncexpr.hpp"
#include "ncball/opspace.hpp"
#include "ncball/specrad.hpp"
#include "ncball/types.hpp"

namespace ncball {

/// f(X) = (I (x) c)^* (I - Sum_j X_j (x) A_j)^{-1} (I (x) b).
/// The coefficient of the word w in f is c^* A^w b.
struct DescriptorRealization {
  MatTuple A;  // d matrices, m x m
  CVector b;
  CVector c;

  int state_dim() const { return A.n(); }
  int d() const { return A.d(); }
  void validate() const;
};

/// f(X) = d0 I + (I (x) c)^* (I - Sum_j X_j (x) A_j)^{-1} (Sum_j X_j (x) b_j).
struct FMRealization {
  MatTuple A;
  std::vector<CVector> B;  // one input vector per variable
  CVector c;
  Complex d0{0.0, 0.0};

  int state_dim() const { return A.n(); }
  int d() const { return A.d(); }
  void validate() const;
};

DescriptorRealization realize_constant(Complex value, int d);
/// Realization of x_j (1-based j): m = 2, A_j = E_12, b = e_2, c = e_1.
DescriptorRealization realize_variable(int j, int d);
DescriptorRealization realization_sum(const DescriptorRealization& f, const DescriptorRealization& g);
DescriptorRealization realization_product(const DescriptorRealization& f, const DescriptorRealization& g);
DescriptorRealization realization_scale(Complex factor, const DescriptorRealization& f);
/// Realization of f^{-1}; throws NotAdmissible when f(0) = c^* b vanishes.
DescriptorRealization realization_inverse(const DescriptorRealization& f);

/// Realization of an expression in d variables, valid near the origin.
/// Throws NotAdmissible naming the first inverse that vanishes at 0.
DescriptorRealization realize(const ExprPtr& e, int d);

/// Rank threshold of the reachable/observable subspace construction.
inline constexpr double kMinimalRankTol = 1e-10;

/// Restriction to the reachable subspace of b followed by the observable
/// subspace of c. Throws NumericalDegeneracy on ambiguous ranks.
DescriptorRealization minimize_realization(const DescriptorRealization& R);

/// Gauge transform A_j -> S^{-1} A_j S, b -> S^{-1} b, c -> S^* c.
DescriptorRealization conjugate_realization(const DescriptorRealization& R, const CMatrix& S);

/// Throws OutsideDomainError (with sigma_min) when the pencil is singular.
CMatrix eval_descriptor(const DescriptorRealization& R, const MatTuple& X);
CMatrix eval_fm(const FMRealization& F, const MatTuple& X);

/// Descriptor realization of size m + 1 with the same values.
DescriptorRealization fm_to_descriptor(const FMRealization& F);
/// FM form of a descriptor realization: d0 = c^* b, b_j = A_j b.
FMRealization descriptor_to_fm(const DescriptorRealization& R);

struct ColligationCheck {
  bool unitary = false;
  double defect = 0.0;  // ||V^*V - I||
  CMatrix V;
};

inline constexpr double kColligationTol = 1e-12;

/// Assembles V = [[d0, c^*], [Sum_j b_j, Sum_j A_j]] (the colligation of an FM
/// realization whose A_j and b_j occupy disjoint row blocks) and tests unitarity.
ColligationCheck fm_colligation_check(const FMRealization& F);

/// Smallest singular value of I - Sum_j X_j (x) A_j.
double domain_sigma_min(const DescriptorRealization& R, const MatTuple& X);

/// Whether X lies in the domain of the pencil. For a minimal realization this
/// is the domain of the function.
bool domain_contains(const DescriptorRealization& R, const MatTuple& X);

struct DomainBallCertificate {
  double inclusion_radius = 0.0;  // r * ball(E) is inside the domain
  double exclusion_radius = 0.0;  // no larger multiple of ball(E) is inside
  bool unbounded = false;         // all A_j vanish: the domain is everything
  RadiusEstimate dual_radius;
  OpSpaceSpec dual_space = OpSpaceSpec::row(1);
};

/// Radii of balls of E certified inside (1 / upper) and excluded from
/// (1 / lower) the domain, from the radius of A in the dual space of E.
DomainBallCertificate domain_ball_certificate(const DescriptorRealization& R, const OpSpaceSpec& space,
                                              const RadiusOptions& opts = {});

/// Degree-m components c^* (Sum_{|w|=m} X^w (x) A^w) b for m = 0..N.
std::vector<CMatrix> homogeneous_components(const DescriptorRealization& R, const MatTuple& X, int N);
/// Sum of the homogeneous components up to degree N.
CMatrix truncated_series_eval(const DescriptorRealization& R, const MatTuple& X, int N);

}  // namespace ncball

#endif  // NCBALL_REALIZATION_HPP
