#include <cmath>
#include <random>
#include <vector>

#include "bkrisk/errors.hpp"
#include "bkrisk/estimation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bkrisk;
using namespace bkrisk::estimation;

namespace {

double oracle_log_pdf(double a, double b, double x) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) + (b - 1.0) * std::log(1.0 - x);
}

SampleStats population_stats(double a, double b, std::size_t n) {
  // E[ln X] = psi(a) - psi(a+b); chosen so the score vanishes exactly at (a, b).
  const BetaKotzParams p(a, b);
  const double dn = static_cast<double>(n);
  return SampleStats{n, mean(p), variance(p), dn * (specfun::digamma(a) - specfun::digamma(a + b)),
                     dn * (specfun::digamma(b) - specfun::digamma(a + b))};
}

void check_stationary(const FitResult& r, const SampleStats& s, double tol) {
  const double a = r.params.a();
  const double b = r.params.b();
  const double n = static_cast<double>(s.n);
  // Recompute the scores directly rather than through score().
  const double g1 = specfun::digamma(a + b) - specfun::digamma(a) + s.sum_log_x / n;
  const double g2 = specfun::digamma(a + b) - specfun::digamma(b) + s.sum_log_1mx / n;
  CHECK(std::abs(g1) <= tol);
  CHECK(std::abs(g2) <= tol);
  // Negative-definite Hessian at the optimum.
  const double ta = specfun::trigamma(a);
  const double tb = specfun::trigamma(b);
  const double tab = specfun::trigamma(a + b);
  CHECK(ta - tab > 0.0);
  CHECK((ta - tab) * (tb - tab) - tab * tab > 0.0);
}

}  // namespace

TEST_CASE("stats_from_samples examples") {
  const std::vector<double> two{0.25, 0.75};
  const auto s = stats_from_samples(two);
  CHECK(s.n == 2);
  CHECK(s.mean == 0.5);
  CHECK(s.variance == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(s.sum_log_x == doctest::Approx(std::log(0.25) + std::log(0.75)).epsilon(1e-15));
  CHECK(s.sum_log_1mx == doctest::Approx(std::log(0.75) + std::log(0.25)).epsilon(1e-15));

  const std::vector<double> flat{0.5, 0.5, 0.5};
  const auto d = stats_from_samples(flat);
  CHECK(d.variance == 0.0);
  CHECK_THROWS_AS(fit_moments(d), InfeasibleMomentsError);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = u(rng);
  CHECK(std::abs(stats_from_samples(xs).mean - 0.5) <= 0.05);
}

TEST_CASE("stats_from_samples rejects endpoints and names the index") {
  const std::vector<double> bad{0.2, 0.3, 1.0, 0.4};
  try {
    stats_from_samples(bad);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("observation 2") != std::string::npos);
  }
  const std::vector<double> zero{0.0, 0.5};
  CHECK_THROWS_AS(stats_from_samples(zero), DomainError);
  const std::vector<double> one{0.5};
  CHECK_THROWS_AS(stats_from_samples(one), DomainError);
  const std::vector<double> nan{0.5, std::nan("")};
  CHECK_THROWS_AS(stats_from_samples(nan), DomainError);
}

TEST_CASE("fit_moments examples") {
  const auto u = fit_moments(SampleStats{10, 0.5, 1.0 / 12.0, 0, 0});
  CHECK(u.a() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.b() == doctest::Approx(1.0).epsilon(1e-14));
  const auto p = fit_moments(SampleStats{10, 1.0 / 3.0, 1.0 / 18.0, 0, 0});
  CHECK(p.a() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.b() == doctest::Approx(2.0).epsilon(1e-14));

  // Round trip at the published January shapes.
  const double m = 0.0064554;
  const double k = 0.199 / m;
  const double v = m * (1.0 - m) / (k + 1.0);
  const auto jan = fit_moments(SampleStats{14000, m, v, 0, 0});
  CHECK(jan.a() == doctest::Approx(0.199).epsilon(1e-12));
  CHECK(std::abs(jan.b() - 30.63) <= 0.01);

  CHECK_THROWS_AS(fit_moments(SampleStats{10, 0.5, 0.25, 0, 0}), InfeasibleMomentsError);
  CHECK_THROWS_AS(fit_moments(SampleStats{10, 0.5, 0.3, 0, 0}), InfeasibleMomentsError);
  CHECK_THROWS_AS(fit_moments(SampleStats{10, 0.5, -1.0, 0, 0}), InfeasibleMomentsError);
  CHECK_THROWS_AS(fit_moments(SampleStats{10, 1.5, 0.01, 0, 0}), DomainError);
}

TEST_CASE("property: moment estimates invert the moment formulas") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> shape(0.1, 60.0);
  for (int i = 0; i < 500; ++i) {
    const BetaKotzParams p(shape(rng), shape(rng));
    const auto q = fit_moments(SampleStats{100, mean(p), variance(p), 0, 0});
    CHECK(std::abs(q.a() / p.a() - 1.0) <= 1e-10);
    CHECK(std::abs(q.b() / p.b() - 1.0) <= 1e-10);
    CHECK(std::abs(mean(q) - mean(p)) <= 1e-12);
    CHECK(std::abs(variance(q) - variance(p)) <= 1e-12);
  }
}

TEST_CASE("log_likelihood examples") {
  const SampleStats any{5, 0.4, 0.02, -3.1, -2.2};
  CHECK(log_likelihood(BetaKotzParams(1, 1), any) == 0.0);
  // A single observation at 0.5, where the Beta(2, 1) density is exactly 1.
  const SampleStats single{1, 0.5, 0.0, std::log(0.5), std::log(0.5)};
  CHECK(std::abs(log_likelihood(BetaKotzParams(2, 1), single)) <= 1e-14);

  const std::vector<double> xs{0.2, 0.4, 0.6};
  double direct = 0.0;
  for (double x : xs) direct += oracle_log_pdf(2.0, 3.0, x);
  CHECK(log_likelihood(BetaKotzParams(2, 3), stats_from_samples(xs)) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("fit_mle at the population sufficient statistics of the uniform") {
  const std::size_t n = 500;
  const SampleStats s{n, 0.5, 1.0 / 12.0, -static_cast<double>(n), -static_cast<double>(n)};
  const auto r = fit_mle(s);
  CHECK(r.converged);
  CHECK(r.gradient_norm <= kDefaultGradTol);
  CHECK(r.params.a() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.params.b() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_mle recovers Beta(2, 5) from 10,000 seeded draws") {
  oracle::BetaSampler draw(2.0, 5.0, 2024);
  const auto xs = draw.draw(10000);
  const auto s = stats_from_samples(xs);
  const auto r = fit_mle(s);
  REQUIRE(r.converged);
  CHECK(r.params.a() > 1.85);
  CHECK(r.params.a() < 2.15);
  CHECK(r.params.b() > 4.6);
  CHECK(r.params.b() < 5.4);
  check_stationary(r, s, kDefaultGradTol);
  CHECK(r.log_likelihood >= log_likelihood(fit_moments(s), s) - 1e-9);
}

TEST_CASE("property: MLE is independent of the starting point") {
  const std::vector<std::pair<double, double>> shapes = {{2, 5}, {0.3, 0.7}, {0.199, 30.63}, {8, 1.5}, {25, 40}};
  unsigned seed = 1;
  for (const auto& [a, b] : shapes) {
    CAPTURE(a);
    CAPTURE(b);
    oracle::BetaSampler draw(a, b, seed++);
    const auto s = stats_from_samples(draw.draw(3000));
    const auto from_mom = fit_mle(s, fit_moments(s));
    const auto from_unit = fit_mle(s, BetaKotzParams(1, 1));
    REQUIRE(from_mom.converged);
    REQUIRE(from_unit.converged);
    CHECK(std::abs(from_mom.params.a() - from_unit.params.a()) <= 1e-8 * std::max(1.0, a));
    CHECK(std::abs(from_mom.params.b() - from_unit.params.b()) <= 1e-8 * std::max(1.0, b));
    check_stationary(from_mom, s, kDefaultGradTol);
    CHECK(from_mom.log_likelihood >= log_likelihood(fit_moments(s), s) - 1e-9);
    CHECK(from_unit.log_likelihood >= log_likelihood(BetaKotzParams(1, 1), s) - 1e-9);
  }
}

TEST_CASE("property: damped iterates stay positive from far-off starts") {
  oracle::BetaSampler draw(0.2, 30.0, 77);
  const auto s = stats_from_samples(draw.draw(2000));
  for (const auto& init : {BetaKotzParams(1, 1), BetaKotzParams(50, 0.1), BetaKotzParams(0.01, 0.01)}) {
    const auto r = fit_mle(s, init);
    CHECK(r.converged);
    CHECK(r.params.a() > 0.0);
    CHECK(r.params.b() > 0.0);
    check_stationary(r, s, kDefaultGradTol);
  }
}

TEST_CASE("fit_mle budget and argument errors") {
  oracle::BetaSampler draw(3.0, 4.0, 9);
  const auto s = stats_from_samples(draw.draw(500));
  const auto r = fit_mle(s, BetaKotzParams(0.5, 0.5), 1e-10, 1);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.gradient_norm > 1e-10);
  CHECK_THROWS_AS(fit_mle(s, std::nullopt, 0.0), DomainError);
  CHECK_THROWS_AS(fit_mle(s, std::nullopt, 1e-10, 0), DomainError);
  CHECK_THROWS_AS(fit_mle(SampleStats{1, 0.5, 0.01, -1, -1}), DomainError);
}

TEST_CASE("fit_mle falls back to (1, 1) when moments are infeasible") {
  // Population logs of Beta(3, 4) with an inconsistent variance.
  auto s = population_stats(3.0, 4.0, 200);
  s.variance = 0.5;
  const auto r = fit_mle(s);
  CHECK(r.converged);
  CHECK(r.params.a() == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(r.params.b() == doctest::Approx(4.0).epsilon(1e-8));
}
