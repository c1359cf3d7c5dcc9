#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hcn/model.hpp"
#include "hcn/quadrature.hpp"
#include "hcn/rng.hpp"
#include "hcn/units.hpp"

namespace {

hcn::NetworkParams single_tier(double power_mw = 1000.0, double density = 100.0,
                               double ue_density = 300.0) {
  hcn::NetworkParams p;
  p.tiers = {hcn::TierParams{power_mw, density, "t1"}};
  p.alpha = 3.75;
  p.ue_density = ue_density;
  return p;
}

hcn::NetworkParams two_tier_iv_b(double lam2 = 200.0) {
  hcn::NetworkParams p;
  p.tiers = {hcn::TierParams{hcn::dbm_to_mw(30.0), 100.0, "micro"},
             hcn::TierParams{hcn::dbm_to_mw(24.0), lam2, "pico"}};
  p.alpha = 3.75;
  p.ue_density = 300.0;
  return p;
}

// random scenario with common power spread up to 40 dB and q = b
hcn::NetworkParams random_network(hcn::RngStream& rng) {
  hcn::NetworkParams p;
  const int tiers = 1 + static_cast<int>(rng.uniform_index(4));
  for (int t = 0; t < tiers; ++t) {
    p.tiers.push_back(hcn::TierParams{hcn::dbm_to_mw(rng.uniform(10.0, 50.0)),
                                      rng.uniform(1.0, 500.0),
                                      "t" + std::to_string(t + 1)});
  }
  p.alpha = rng.uniform(2.1, 6.0);
  p.ue_density = rng.uniform(10.0, 2000.0);
  p.shape_q = p.rate_b = rng.uniform(1.0, 6.0);
  return p;
}

}  // namespace

TEST_CASE("power_ratio examples") {
  auto p = two_tier_iv_b();
  CHECK(hcn::power_ratio(p, 0, 0) == 1.0);
  CHECK(hcn::power_ratio(p, 1, 1) == 1.0);

  // direct exponentiation oracles
  const double c_21 = std::pow(std::pow(10.0, -0.6), 1.0 / 3.75);
  CHECK(hcn::power_ratio(p, 0, 1) == Catch::Approx(c_21).epsilon(1e-14));
  CHECK(hcn::power_ratio(p, 0, 1) == Catch::Approx(0.69183).margin(5e-6));

  hcn::NetworkParams p3;
  p3.tiers = {hcn::TierParams{hcn::dbm_to_mw(46.0), 10.0, "macro"},
              hcn::TierParams{hcn::dbm_to_mw(24.0), 300.0, "pico"}};
  p3.alpha = 3.75;
  p3.ue_density = 300.0;
  const double c_31 = std::pow(std::pow(10.0, -2.2), 1.0 / 3.75);
  CHECK(hcn::power_ratio(p3, 0, 1) == Catch::Approx(c_31).epsilon(1e-14));
  CHECK(hcn::power_ratio(p3, 0, 1) == Catch::Approx(0.2590200).margin(5e-6));
}

TEST_CASE("association probability examples") {
  CHECK(hcn::association_probability(single_tier(), 0) == 1.0);

  hcn::NetworkParams equal;
  equal.tiers = {hcn::TierParams{500.0, 120.0, "a"},
                 hcn::TierParams{500.0, 120.0, "b"}};
  equal.alpha = 4.0;
  equal.ue_density = 100.0;
  CHECK(hcn::association_probability(equal, 0) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(hcn::association_probability(equal, 1) == Catch::Approx(0.5).epsilon(1e-14));

  // plug-in evaluation with lambda_1 = 100, lambda_2 = 200
  auto p = two_tier_iv_b(200.0);
  const double c = std::pow(std::pow(10.0, -0.6), 1.0 / 3.75);
  const double expected = 100.0 / (100.0 + 200.0 * c * c);
  CHECK(hcn::association_probability(p, 0) == Catch::Approx(expected).epsilon(1e-13));
  CHECK(hcn::association_probability(p, 0) == Catch::Approx(0.5109183).margin(5e-6));
}

TEST_CASE("association probabilities sum to one", "[property]") {
  hcn::RngStream rng(101, 0, 0);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_network(rng);
    double sum = 0.0;
    for (std::size_t t = 0; t < p.tiers.size(); ++t) {
      const double a = hcn::association_probability(p, t);
      CHECK(a > 0.0);
      CHECK(a <= 1.0);
      sum += a;
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("association probability is scale invariant in power", "[property]") {
  hcn::RngStream rng(102, 0, 0);
  for (int i = 0; i < 100; ++i) {
    auto p = random_network(rng);
    auto scaled = p;
    const double factor = std::exp(rng.uniform(-3.0, 3.0));
    for (auto& tier : scaled.tiers) tier.tx_power_mw *= factor;
    for (std::size_t t = 0; t < p.tiers.size(); ++t) {
      CHECK(hcn::association_probability(scaled, t) ==
            Catch::Approx(hcn::association_probability(p, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("association and active density respond monotonically to density",
          "[property]") {
  hcn::RngStream rng(103, 0, 0);
  for (int i = 0; i < 100; ++i) {
    auto p = random_network(rng);
    if (p.tiers.size() < 2) continue;
    const std::size_t i0 = 0, j0 = 1;

    auto denser = p;
    denser.tiers[i0].density *= 1.5;
    CHECK(hcn::association_probability(denser, i0) >
          hcn::association_probability(p, i0));
    CHECK(hcn::active_density(denser, i0) >=
          hcn::active_density(p, i0) - 1e-12);

    auto rival = p;
    rival.tiers[j0].density *= 1.5;
    CHECK(hcn::association_probability(rival, i0) <
          hcn::association_probability(p, i0));
  }
}

TEST_CASE("cell size pdf: normalization, mean and value oracle") {
  auto p = single_tier();  // lambda = 100, q = b = 3.5

  hcn::QuadratureSpec spec;
  spec.relative_tolerance = 1e-11;
  spec.absolute_tolerance = 1e-13;
  spec.max_subdivisions = 2000;
  const double rate = p.rate_b * 100.0;
  const double hi = (p.shape_q + 45.0) / rate;
  const auto norm = hcn::integrate(
      [&](double x) { return x > 0.0 ? hcn::cell_size_pdf(p, 0, x) : 0.0; },
      1e-300, hi, spec);
  CHECK(norm.value == Catch::Approx(1.0).margin(1e-9));

  const auto mean = hcn::integrate(
      [&](double x) { return x > 0.0 ? x * hcn::cell_size_pdf(p, 0, x) : 0.0; },
      1e-300, hi, spec);
  CHECK(mean.value == Catch::Approx(1.0 / 100.0).margin(1e-9));

  // direct gamma-density oracle via tgamma at x = 0.01
  const double oracle = std::pow(350.0, 3.5) * std::pow(0.01, 2.5) *
                        std::exp(-350.0 * 0.01) / std::tgamma(3.5);
  CHECK(hcn::cell_size_pdf(p, 0, 0.01) == Catch::Approx(oracle).epsilon(1e-12));
  CHECK(hcn::cell_size_pdf(p, 0, 0.01) == Catch::Approx(72.8838).margin(2e-3));

  CHECK_THROWS_AS(hcn::cell_size_pdf(p, 0, 0.0), std::domain_error);
  CHECK_THROWS_AS(hcn::cell_size_pdf(p, 0, -1.0), std::domain_error);
}

TEST_CASE("ue count pmf: value, normalization and mean") {
  auto p = single_tier();  // lambda_u = 300, lambda = 100

  CHECK(hcn::ue_count_pmf(p, 0, 0) ==
        Catch::Approx(std::pow(350.0 / 650.0, 3.5)).epsilon(1e-12));

  double sum = 0.0, mean = 0.0;
  for (long long n = 0; n < 2000; ++n) {
    const double pmf = hcn::ue_count_pmf(p, 0, n);
    sum += pmf;
    mean += static_cast<double>(n) * pmf;
  }
  CHECK(sum >= 1.0 - 1e-12);
  CHECK(sum <= 1.0 + 1e-12);
  CHECK(mean == Catch::Approx(300.0 / 100.0).margin(1e-9));

  CHECK_THROWS_AS(hcn::ue_count_pmf(p, 0, -1), std::domain_error);
}

TEST_CASE("ue count pmf matches the mixture integral oracle", "[property]") {
  auto p = single_tier();
  const double q = p.shape_q;
  const double blam = p.rate_b * 100.0;
  const double lam_u = p.ue_density;

  hcn::QuadratureSpec spec;
  spec.relative_tolerance = 1e-11;
  spec.absolute_tolerance = 1e-16;
  spec.max_subdivisions = 4000;

  for (long long n : {0LL, 1LL, 5LL, 20LL}) {
    const double shape = static_cast<double>(n) + q;
    const double hi = (shape + 50.0 + 20.0 * std::sqrt(shape)) / (lam_u + blam);
    const auto mixture = hcn::integrate(
        [&](double x) {
          if (x <= 0.0) return 0.0;
          const double log_poisson = n * std::log(lam_u * x) - lam_u * x -
                                     std::lgamma(static_cast<double>(n) + 1.0);
          const double log_gamma_pdf = q * std::log(blam) +
                                       (q - 1.0) * std::log(x) - blam * x -
                                       std::lgamma(q);
          return std::exp(log_poisson + log_gamma_pdf);
        },
        1e-300, hi, spec);
    CHECK(hcn::ue_count_pmf(p, 0, n) == Catch::Approx(mixture.value).margin(1e-8));
  }
}

TEST_CASE("idle probability examples") {
  // single tier: A = 1, so only the empty-cell term survives
  auto p1 = single_tier();
  CHECK(hcn::idle_probability(p1, 0) ==
        Catch::Approx(hcn::ue_count_pmf(p1, 0, 0)).epsilon(1e-13));

  // two equal tiers make A = 1/2 with b lambda = 350 per tier
  hcn::NetworkParams p2;
  p2.tiers = {hcn::TierParams{1000.0, 100.0, "a"},
              hcn::TierParams{1000.0, 100.0, "b"}};
  p2.alpha = 3.75;
  p2.ue_density = 300.0;
  CHECK(hcn::idle_probability(p2, 0) ==
        Catch::Approx(std::pow(0.7, 3.5)).epsilon(1e-13));
  CHECK(hcn::idle_probability(p2, 0) == Catch::Approx(0.2869744).margin(5e-6));
}

TEST_CASE("idle probability series agrees with the closed form", "[property]") {
  hcn::RngStream rng(104, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_network(rng);
    for (std::size_t t = 0; t < p.tiers.size(); ++t) {
      const double closed = hcn::idle_probability(p, t);
      const double series = hcn::idle_probability_series(p, t);
      CHECK(series == Catch::Approx(closed).margin(1e-10));
    }
  }
}

TEST_CASE("active density examples") {
  auto p = single_tier();
  const auto full = hcn::fully_loaded_tiers(p);
  CHECK(full[0].active_density == 100.0);
  CHECK(full[0].idle_prob == 0.0);

  // oracle: 100 * (1 - (350/650)^3.5)
  const double oracle = 100.0 * (1.0 - std::pow(350.0 / 650.0, 3.5));
  CHECK(hcn::active_density(p, 0) == Catch::Approx(oracle).epsilon(1e-13));
  CHECK(hcn::active_density(p, 0) == Catch::Approx(88.5438).margin(1e-3));

  // idle ~ 0.28717 with two equal tiers
  hcn::NetworkParams p2;
  p2.tiers = {hcn::TierParams{1000.0, 100.0, "a"},
              hcn::TierParams{1000.0, 100.0, "b"}};
  p2.alpha = 3.75;
  p2.ue_density = 300.0;
  CHECK(hcn::active_density(p2, 0) ==
        Catch::Approx(100.0 * (1.0 - std::pow(0.7, 3.5))).epsilon(1e-13));
}

TEST_CASE("derived tiers satisfy the probability and conservation bounds",
          "[property]") {
  hcn::RngStream rng(105, 0, 0);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_network(rng);  // q = b by construction
    const auto derived = hcn::derive_tiers(p);
    double assoc_sum = 0.0, active_sum = 0.0;
    for (std::size_t t = 0; t < derived.size(); ++t) {
      assoc_sum += derived[t].association_prob;
      active_sum += derived[t].active_density;
      CHECK(derived[t].idle_prob >= 0.0);
      CHECK(derived[t].idle_prob <= 1.0);
      CHECK(derived[t].active_density >= 0.0);
      CHECK(derived[t].active_density <= p.tiers[t].density);
      // no more serving BSs than associated UEs, in expectation
      CHECK(derived[t].active_density <=
            p.ue_density * derived[t].association_prob + 1e-9);
    }
    CHECK(assoc_sum == Catch::Approx(1.0).margin(1e-12));
    CHECK(active_sum <= p.ue_density + 1e-9);
  }
}

TEST_CASE("serving distance pdf: normalization and single-tier reduction") {
  auto p2 = two_tier_iv_b(200.0);
  hcn::QuadratureSpec spec;
  spec.relative_tolerance = 1e-11;
  spec.absolute_tolerance = 1e-13;
  spec.max_subdivisions = 2000;

  for (std::size_t t = 0; t < 2; ++t) {
    const double sdep = hcn::weighted_density_sum(p2, t);
    const double hi = 6.5 / std::sqrt(sdep);
    const auto norm = hcn::integrate(
        [&](double r) { return hcn::serving_distance_pdf(p2, t, r); }, 0.0, hi,
        spec);
    CHECK(norm.value == Catch::Approx(1.0).margin(1e-9));
  }

  // single tier: nearest-neighbor law 2 pi lambda r exp(-pi lambda r^2)
  auto p1 = single_tier();
  const double pi = std::numbers::pi;
  for (double r : {0.005, 0.02, 0.05, 0.1}) {
    const double rayleigh = 2.0 * pi * 100.0 * r * std::exp(-pi * 100.0 * r * r);
    CHECK(hcn::serving_distance_pdf(p1, 0, r) ==
          Catch::Approx(rayleigh).epsilon(1e-13));
  }

  CHECK_THROWS_AS(hcn::serving_distance_pdf(p1, 0, -0.1), std::domain_error);
}

TEST_CASE("network validation rejects bad parameters") {
  hcn::NetworkParams p;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = single_tier();
  p.alpha = 2.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = single_tier();
  p.tiers[0].density = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = single_tier();
  p.ue_density = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = single_tier();
  p.noise_power_mw = -1e-9;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  CHECK_THROWS_AS(hcn::association_probability(single_tier(), 3),
                  std::out_of_range);
}
