#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/model.hpp"
#include "test_support.hpp"

using namespace kirchhoff;
using kirchhoff::testing::Lcg;

TEST_CASE("power nonlinearity values") {
  const auto v = eval_nonlinearity(PowerNonlinearity{1.0}, 4.0);
  CHECK(v.m == 4.0);
  CHECK(v.M == 8.0);
  CHECK(v.m_prime == 1.0);

  const auto kink = eval_nonlinearity(PowerNonlinearity{0.5}, 0.0);
  CHECK(kink.m == 0.0);
  CHECK(kink.M == 0.0);
  CHECK(std::isinf(kink.m_prime));
  CHECK(eval_nonlinearity(PowerNonlinearity{2.0}, 0.0).m_prime == 0.0);
  CHECK(eval_nonlinearity(PowerNonlinearity{1.0}, 0.0).m_prime == 1.0);
}

TEST_CASE("table nonlinearity integrates the linear segment exactly") {
  const TableNonlinearity table({{0.0, 1.0}, {1.0, 2.0}});
  CHECK(table.mu() == 1.0);
  const auto v = eval_nonlinearity(table, 0.5);
  CHECK(v.m == doctest::Approx(1.5).epsilon(1e-15));
  // int_0^0.5 (1 + s) ds
  CHECK(v.M == doctest::Approx(0.5 + 0.125).epsilon(1e-15));
  CHECK(v.m_prime == 1.0);
}

TEST_CASE("table extends constantly and uses right derivatives at breakpoints") {
  const TableNonlinearity table({{1.0, 2.0}, {2.0, 4.0}, {3.0, 3.0}});
  CHECK(eval_nonlinearity(table, 0.5).m == 2.0);
  CHECK(eval_nonlinearity(table, 0.5).M == 1.0);
  CHECK(eval_nonlinearity(table, 0.5).m_prime == 0.0);
  CHECK(eval_nonlinearity(table, 1.0).m_prime == 2.0);
  CHECK(eval_nonlinearity(table, 2.0).m_prime == -1.0);
  CHECK(eval_nonlinearity(table, 3.0).m_prime == 0.0);
  // 2 + 3 + 3.5 up to sigma = 3, then slope 3
  CHECK(eval_nonlinearity(table, 5.0).M == doctest::Approx(2.0 + 3.0 + 3.5 + 6.0));
  CHECK(table.mu() == 2.0);
  CHECK(table.max_value() == 4.0);
}

TEST_CASE("nonlinearity validation") {
  CHECK_THROWS_AS(TableNonlinearity({}), ConfigError);
  CHECK_THROWS_AS(TableNonlinearity({{0.0, 1.0}, {0.0, 2.0}}), ConfigError);
  CHECK_THROWS_AS(TableNonlinearity({{-1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(TableNonlinearity({{0.0, -1.0}}), ConfigError);
  CHECK_THROWS_AS(validate(Nonlinearity{PowerNonlinearity{0.0}}), ConfigError);
  CHECK_THROWS_AS(validate(Dissipation{PowerLawDissipation{-0.5}}), ConfigError);
  CHECK_THROWS_AS(validate(Dissipation{ConstantDissipation{0.0}}), ConfigError);
  CHECK_THROWS_AS(eval_nonlinearity(PowerNonlinearity{1.0}, -1e-3), DomainError);
}

TEST_CASE("primitive M is nondecreasing and vanishes at zero") {
  Lcg rng(3);
  const std::vector<Nonlinearity> cases{
      PowerNonlinearity{0.25}, PowerNonlinearity{1.0}, PowerNonlinearity{3.0},
      TableNonlinearity({{0.0, 0.0}, {0.5, 2.0}, {1.5, 0.5}, {4.0, 1.0}}), constant_nonlinearity(2.0)};
  for (const auto& nl : cases) {
    CHECK(eval_nonlinearity(nl, 0.0).M == 0.0);
    double prev = 0.0;
    for (double s = 0.0; s < 6.0; s += rng.uniform(0.0, 0.05)) {
      const double M = eval_nonlinearity(nl, s).M;
      CHECK(M >= prev);
      prev = M;
    }
  }
}

TEST_CASE("dissipation closed forms") {
  const auto a = eval_dissipation(PowerLawDissipation{1.0}, std::exp(1.0) - 1.0);
  CHECK(a.b == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(a.B == doctest::Approx(1.0).epsilon(1e-15));
  const auto c = eval_dissipation(PowerLawDissipation{0.0}, 3.0);
  CHECK(c.b == 1.0);
  CHECK(c.B == 3.0);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(eval_dissipation(PowerLawDissipation{2.0}, inf).B == doctest::Approx(1.0));
  CHECK(std::isinf(eval_dissipation(PowerLawDissipation{0.5}, inf).B));
  const auto d = eval_dissipation(ConstantDissipation{0.5}, 4.0);
  CHECK(d.b == 0.5);
  CHECK(d.B == 2.0);
}

TEST_CASE("B matches quadrature of b on random samples") {
  Lcg rng(19);
  using boost::math::quadrature::gauss_kronrod;
  for (int trial = 0; trial < 200; ++trial) {
    const double p = trial % 10 == 0 ? 1.0 : rng.uniform(0.0, 3.0);
    const double t = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
    const Dissipation dis = PowerLawDissipation{p};
    const double quad = gauss_kronrod<double, 61>::integrate(
        [&](double s) { return damping(dis, s); }, 0.0, t, 12, 1e-13);
    CHECK(testing::rel_diff(eval_dissipation(dis, t).B, quad) <= 1e-10);
  }
}

TEST_CASE("dissipation integrability") {
  CHECK(dissipation_integrable(PowerLawDissipation{2.0}));
  CHECK_FALSE(dissipation_integrable(PowerLawDissipation{1.0}));
  CHECK_FALSE(dissipation_integrable(ConstantDissipation{1.0}));
}

TEST_CASE("p_gamma threshold") {
  CHECK(p_gamma(1.0) == 1.0);
  CHECK(p_gamma(2.0) == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  CHECK(p_gamma(0.5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(p_gamma(0.0), DomainError);
  for (double g = 1.0001; g < 1000.0; g *= 1.1) CHECK(p_gamma(g) < 1.0);
  CHECK(p_gamma(1e8) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(PowerNonlinearity{1.0}, PowerLawDissipation{0.5}, false).tag ==
        RegimeTag::Parabolic);
  CHECK(classify_regime(PowerNonlinearity{2.0}, PowerLawDissipation{0.8}, false).tag ==
        RegimeTag::NoMansLand);
  CHECK(classify_regime(PowerNonlinearity{2.0}, PowerLawDissipation{1.5}, false).tag ==
        RegimeTag::Hyperbolic);
  CHECK(classify_regime(constant_nonlinearity(1.0), PowerLawDissipation{1.5}, true).tag ==
        RegimeTag::Hyperbolic);
  CHECK(classify_regime(PowerNonlinearity{2.0}, PowerLawDissipation{0.8}, true).tag ==
        RegimeTag::Parabolic);
  CHECK(classify_regime(constant_nonlinearity(1.0), PowerLawDissipation{1.0}, false).tag ==
        RegimeTag::Parabolic);
  const TableNonlinearity degenerate({{0.0, 0.0}, {1.0, 1.0}});
  CHECK(classify_regime(degenerate, PowerLawDissipation{0.5}, true).tag == RegimeTag::NoTheory);
  CHECK(classify_regime(degenerate, ConstantDissipation{2.0}, true).tag == RegimeTag::Parabolic);
  const auto r = classify_regime(PowerNonlinearity{2.0}, PowerLawDissipation{0.5}, false);
  REQUIRE(r.threshold.has_value());
  CHECK(*r.threshold == doctest::Approx(5.0 / 7.0));
}

TEST_CASE("raising p never returns from hyperbolic to parabolic") {
  for (double g : {0.25, 0.5, 1.0, 2.0, 4.0, 7.0}) {
    for (bool coercive : {false, true}) {
      bool seen_hyperbolic = false;
      for (double p = 0.0; p <= 2.0; p += 0.01) {
        const auto tag = classify_regime(PowerNonlinearity{g}, PowerLawDissipation{p}, coercive).tag;
        if (seen_hyperbolic) CHECK(tag == RegimeTag::Hyperbolic);
        seen_hyperbolic = seen_hyperbolic || tag == RegimeTag::Hyperbolic;
      }
      CHECK(seen_hyperbolic);
    }
  }
}

TEST_CASE("corrector initial velocity") {
  CHECK(compute_w0(Spectrum{1.0}, PowerNonlinearity{1.0}, PowerLawDissipation{0.0},
                   ModalVector{2.0}, ModalVector{0.0}) == ModalVector{8.0});
  CHECK(compute_w0(Spectrum{1.0, 3.0}, PowerNonlinearity{1.5}, PowerLawDissipation{0.3},
                   ModalVector{0.0, 0.0}, ModalVector{0.5, -2.0}) == ModalVector{0.5, -2.0});
  CHECK(compute_w0(Spectrum{1.0}, constant_nonlinearity(1.0), PowerLawDissipation{0.0},
                   ModalVector{1.0}, ModalVector{-1.0}) == ModalVector{0.0});
  // b(0) = delta for constant dissipation
  CHECK(compute_w0(Spectrum{2.0}, constant_nonlinearity(1.0), ConstantDissipation{4.0},
                   ModalVector{1.0}, ModalVector{0.0}) == ModalVector{0.5});
}
