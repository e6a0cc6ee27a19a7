#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kirchhoff {

/// Finite spectrum of a nonnegative self-adjoint operator A.
///
/// The operator is diagonal in its eigenbasis, so it is fully described by
/// the sorted list of eigenvalues 0 <= lambda_1 <= ... <= lambda_N.
/// Multiplicities are expressed by repetition.
class Spectrum {
 public:
  /// Throws ConfigError when empty, negative, non-finite or unsorted.
  explicit Spectrum(std::vector<double> eigenvalues);
  Spectrum(std::initializer_list<double> eigenvalues)
      : Spectrum(std::vector<double>(eigenvalues)) {}

  /// lambda_k = a * k^q for k = 1..n.
  static Spectrum power_law(double a, double q, std::size_t n);

  std::size_t size() const { return eigenvalues_.size(); }
  double operator[](std::size_t k) const { return eigenvalues_[k]; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double largest() const { return eigenvalues_.back(); }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> eigenvalues_;
};

/// Coefficients of a vector of H in the eigenbasis of A.
class ModalVector {
 public:
  ModalVector() = default;
  explicit ModalVector(std::size_t n, double value = 0.0) : coefficients_(n, value) {}
  explicit ModalVector(std::vector<double> coefficients)
      : coefficients_(std::move(coefficients)) {}
  ModalVector(std::initializer_list<double> coefficients) : coefficients_(coefficients) {}

  std::size_t size() const { return coefficients_.size(); }
  double& operator[](std::size_t k) { return coefficients_[k]; }
  double operator[](std::size_t k) const { return coefficients_[k]; }
  std::span<const double> values() const { return coefficients_; }
  std::span<double> values() { return coefficients_; }
  auto begin() const { return coefficients_.begin(); }
  auto end() const { return coefficients_.end(); }

  bool is_zero() const;

  ModalVector& operator+=(const ModalVector& other);
  ModalVector& operator-=(const ModalVector& other);
  ModalVector& operator*=(double factor);

  friend ModalVector operator+(ModalVector a, const ModalVector& b) { return a += b; }
  friend ModalVector operator-(ModalVector a, const ModalVector& b) { return a -= b; }
  friend ModalVector operator*(double s, ModalVector a) { return a *= s; }
  friend ModalVector operator-(ModalVector a) { return a *= -1.0; }
  friend bool operator==(const ModalVector&, const ModalVector&) = default;

 private:
  std::vector<double> coefficients_;
};

/// Throws ConfigError unless x has one coefficient per eigenvalue.
void require_matching(const Spectrum& spec, const ModalVector& x, const char* what = "vector");

/// |A^order x|^2 = sum_k lambda_k^(2 order) x_k^2, with 0^0 = 1.
double sobolev_norm_sq(const Spectrum& spec, const ModalVector& x, double order);

/// (A x)_k = lambda_k x_k.
ModalVector apply_A(const Spectrum& spec, const ModalVector& x);

/// nu = lambda_1; the operator is coercive iff nu > 0.
double coercivity(const Spectrum& spec);

/// <A^order x, A^order y> = sum_k lambda_k^(2 order) x_k y_k (compensated).
double weighted_dot(const Spectrum& spec, const ModalVector& x, const ModalVector& y,
                    double order);

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double value);
  double result() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace kirchhoff
