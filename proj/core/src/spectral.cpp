#include "kirchhoff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

Spectrum::Spectrum(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
  if (eigenvalues_.empty()) throw ConfigError("spectrum: at least one eigenvalue is required");
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
    const double lambda = eigenvalues_[k];
    if (!std::isfinite(lambda) || lambda < 0.0)
      throw ConfigError("spectrum: eigenvalue " + std::to_string(k + 1) +
                        " must be finite and nonnegative");
  }
  if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end()))
    throw ConfigError("spectrum: eigenvalues must be sorted nondecreasing");
}

Spectrum Spectrum::power_law(double a, double q, std::size_t n) {
  if (n == 0) throw ConfigError("spectrum.n: must be at least 1");
  if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("spectrum.a: must be nonnegative");
  if (!std::isfinite(q)) throw ConfigError("spectrum.q: must be finite");
  std::vector<double> values(n);
  for (std::size_t k = 1; k <= n; ++k) values[k - 1] = a * std::pow(static_cast<double>(k), q);
  // q < 0 produces a decreasing rule
  std::sort(values.begin(), values.end());
  return Spectrum(std::move(values));
}

bool ModalVector::is_zero() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](double c) { return c == 0.0; });
}

ModalVector& ModalVector::operator+=(const ModalVector& other) {
  if (other.size() != size()) throw UsageError("ModalVector: length mismatch in +=");
  for (std::size_t k = 0; k < size(); ++k) coefficients_[k] += other.coefficients_[k];
  return *this;
}

ModalVector& ModalVector::operator-=(const ModalVector& other) {
  if (other.size() != size()) throw UsageError("ModalVector: length mismatch in -=");
  for (std::size_t k = 0; k < size(); ++k) coefficients_[k] -= other.coefficients_[k];
  return *this;
}

ModalVector& ModalVector::operator*=(double factor) {
  for (double& c : coefficients_) c *= factor;
  return *this;
}

void require_matching(const Spectrum& spec, const ModalVector& x, const char* what) {
  if (x.size() != spec.size())
    throw ConfigError(std::string(what) + ": length " + std::to_string(x.size()) +
                      " does not match spectrum size " + std::to_string(spec.size()));
}

void CompensatedSum::add(double value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value))
    correction_ += (sum_ - t) + value;
  else
    correction_ += (value - t) + sum_;
  sum_ = t;
}

namespace {

// lambda^(2 order) with the 0^0 = 1 convention; exact for the common orders.
double spectral_weight(double lambda, double order) {
  if (order == 0.0) return 1.0;
  if (order == 0.5) return lambda;
  if (order == 1.0) return lambda * lambda;
  return std::pow(lambda, 2.0 * order);
}

}  // namespace

double weighted_dot(const Spectrum& spec, const ModalVector& x, const ModalVector& y,
                    double order) {
  require_matching(spec, x, "x");
  require_matching(spec, y, "y");
  if (!(order >= 0.0)) throw DomainError("sobolev order must be nonnegative");
  CompensatedSum sum;
  for (std::size_t k = 0; k < spec.size(); ++k)
    sum.add(spectral_weight(spec[k], order) * x[k] * y[k]);
  return sum.result();
}

double sobolev_norm_sq(const Spectrum& spec, const ModalVector& x, double order) {
  return weighted_dot(spec, x, x, order);
}

ModalVector apply_A(const Spectrum& spec, const ModalVector& x) {
  require_matching(spec, x, "x");
  ModalVector result(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) result[k] = spec[k] * x[k];
  return result;
}

double coercivity(const Spectrum& spec) { return spec[0]; }

}  // namespace kirchhoff
