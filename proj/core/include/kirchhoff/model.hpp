#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kirchhoff/spectral.hpp"

namespace kirchhoff {

/// m(sigma) = sigma^gamma.
struct PowerNonlinearity {
  double gamma;
};

/// Piecewise-linear m through (sigma_i, m_i), extended constantly outside
/// the breakpoint range. mu = inf m is the smallest breakpoint value.
class TableNonlinearity {
 public:
  /// Throws ConfigError on an empty table, a non-increasing sigma grid,
  /// negative sigma or negative values.
  explicit TableNonlinearity(std::vector<std::pair<double, double>> points);

  const std::vector<std::pair<double, double>>& points() const { return points_; }
  double mu() const { return mu_; }
  double max_value() const { return max_value_; }

  struct Value {
    double m, M, m_prime;
  };
  Value evaluate(double sigma) const;

 private:
  std::vector<std::pair<double, double>> points_;
  std::vector<double> primitive_;  // M at each breakpoint
  double mu_ = 0.0;
  double max_value_ = 0.0;
};

using Nonlinearity = std::variant<PowerNonlinearity, TableNonlinearity>;

/// m == value everywhere.
Nonlinearity constant_nonlinearity(double value);

/// b(t) = (1+t)^(-p).
struct PowerLawDissipation {
  double p;
};

/// b(t) = delta.
struct ConstantDissipation {
  double delta;
};

using Dissipation = std::variant<PowerLawDissipation, ConstantDissipation>;

/// m(sigma), M(sigma) = int_0^sigma m, and the right derivative m'(sigma).
struct NonlinearityValue {
  double m;
  double M;
  double m_prime;  // +infinity at the kink of sigma^gamma, gamma < 1
};

/// b(t) and B(t) = int_0^t b.
struct DissipationValue {
  double b;
  double B;
};

/// Throws DomainError for sigma < 0.
NonlinearityValue eval_nonlinearity(const Nonlinearity& nl, double sigma);

inline double stiffness(const Nonlinearity& nl, double sigma) {
  return eval_nonlinearity(nl, sigma).m;
}

/// mu = inf m (0 for power nonlinearities).
double nondegeneracy_constant(const Nonlinearity& nl);

/// Validates gamma > 0 / p >= 0 / delta > 0; throws ConfigError otherwise.
void validate(const Nonlinearity& nl);
void validate(const Dissipation& dis);

/// t may be +infinity; B(inf) is finite only for integrable dissipation.
DissipationValue eval_dissipation(const Dissipation& dis, double t);

inline double damping(const Dissipation& dis, double t) { return eval_dissipation(dis, t).b; }

/// int_0^inf b < inf.
bool dissipation_integrable(const Dissipation& dis);

/// Exponent p of the model b(t) = (1+t)^(-p); constant dissipation maps to 0.
double dissipation_exponent(const Dissipation& dis);

/// Right endpoint of the parabolic range in the degenerate noncoercive case.
/// Throws DomainError for gamma <= 0.
double p_gamma(double gamma);

enum class RegimeTag { Parabolic, Hyperbolic, NoMansLand, NoTheory };

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag;
  std::optional<double> threshold;  // p_gamma when it was consulted

  friend bool operator==(const Regime&, const Regime&) = default;
};

Regime classify_regime(const Nonlinearity& nl, const Dissipation& dis, bool coercive);

/// Initial velocity of the corrector: w0 = u1 + m(|A^{1/2}u0|^2) A u0 / b(0).
ModalVector compute_w0(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                       const ModalVector& u0, const ModalVector& u1);

/// Upper bound for m(|A^{1/2}u|^2) along any hyperbolic trajectory whose
/// Hamiltonian does not exceed `hamiltonian`.
double stiffness_bound(const Nonlinearity& nl, double hamiltonian);

}  // namespace kirchhoff
