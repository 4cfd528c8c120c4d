#ifndef NCBALL_TYPES_HPP
#define NCBALL_TYPES_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncball {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class ErrorCode {
  InvalidInput,
  Dimension,
  Config,
  Resource,
  NumericalDegeneracy,
  Optimization,
  NotAdmissible,
  OutsideDomain,
  UnsupportedDual,
  UnsupportedVariant,
  Syntax,
  Schema,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a point lies outside the domain of a realization; carries the
/// smallest singular value of the offending pencil.
class OutsideDomainError : public Error {
 public:
  OutsideDomainError(double sigma_min, const std::string& what)
      : Error(ErrorCode::OutsideDomain, what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(ErrorCode::Syntax, what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

bool all_finite(const CMatrix& m);
void require_finite(const CMatrix& m, const char* what);

/// A d-tuple of n x n complex matrices. Immutable once built; every
/// transformation returns a new tuple.
class MatTuple {
 public:
  MatTuple() = default;
  explicit MatTuple(std::vector<CMatrix> mats);

  static MatTuple zeros(int d, int n);
  /// Tuple of 1x1 matrices from scalars.
  static MatTuple scalars(std::span<const Complex> values);
  static MatTuple scalars(std::initializer_list<Complex> values);

  int d() const noexcept { return static_cast<int>(mats_.size()); }
  int n() const noexcept { return n_; }
  bool empty() const noexcept { return mats_.empty(); }

  const CMatrix& operator[](int j) const { return mats_[static_cast<std::size_t>(j)]; }
  const std::vector<CMatrix>& mats() const noexcept { return mats_; }

  /// S^{-1} X_j S for every j.
  MatTuple conjugated(const CMatrix& S) const;
  MatTuple conjugated(const CMatrix& S, const CMatrix& S_inv) const;
  /// V^* X_j V, the compression to the column span of an isometry V.
  MatTuple compressed(const CMatrix& V) const;
  MatTuple scaled(Complex lambda) const;
  MatTuple adjoint() const;
  MatTuple block(int offset, int size) const;

  /// Product X_{w_1} ... X_{w_k} (letters are 0-based); identity for the empty word.
  CMatrix word(std::span<const int> w) const;

  double max_abs_diff(const MatTuple& other) const;

 private:
  std::vector<CMatrix> mats_;
  int n_ = 0;
};

MatTuple direct_sum(const MatTuple& a, const MatTuple& b);

}  // namespace ncball

#endif  // NCBALL_TYPES_HPP
