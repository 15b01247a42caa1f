#include <gtest/gtest.h>

#include <cmath>

#include "bhc/witness.hpp"
#include "oracles.hpp"

using namespace bhc;

namespace {

SearchConfig small_config(unsigned m, std::size_t n) {
  SearchConfig cfg;
  cfg.m = m;
  cfg.num_vars = n;
  cfg.restarts = 4;
  cfg.eval_budget = 150;
  cfg.rng_seed = 42;
  return cfg;
}

}  // namespace

TEST(Certify, FamilyWitness) {
  const auto cert = certify(build_pm(2, {1, -1, std::pow(2.0, 1.5)}));
  EXPECT_NEAR(cert.estimate, 1.1066819, 1e-7);
  EXPECT_GT(cert.certified_lower, 0.0);
  EXPECT_LE(cert.certified_lower, 1.1067);
  EXPECT_LE(cert.certified_lower, cert.estimate);
  EXPECT_EQ(cert.certified_lower, cert.coeff_norm / cert.supnorm.upper_bracket);
  EXPECT_EQ(cert.estimate, cert.coeff_norm / cert.supnorm.lower_estimate);
}

TEST(Certify, FamilyWitnessCertifiesAboveOneOnFineGrid) {
  SupNormConfig fine;
  fine.grid_points_per_axis = 4096;
  const auto cert = certify(build_pm(2, {1, -1, std::pow(2.0, 1.5)}), fine);
  EXPECT_GT(cert.certified_lower, 1.0);
}

TEST(Certify, MonomialBracketsOne) {
  for (int k : {8, 64, 512}) {
    SupNormConfig cfg;
    cfg.grid_points_per_axis = k;
    const auto cert = certify(HomogeneousPolynomial(3, 2, {{{3, 0}, 1.0}}), cfg);
    EXPECT_LE(cert.certified_lower, 1.0);
    EXPECT_GE(cert.estimate, 1.0);
  }
  EXPECT_THROW(certify(HomogeneousPolynomial(3, 2, {})), std::invalid_argument);
}

TEST(Certificate, RoundTripIsBitExact) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = oracle::random_polynomial(gen, 1 + gen() % 3, 2 + static_cast<unsigned>(gen() % 3));
    const auto cert = certify(p);
    const auto text = certificate_to_json(cert).dump(2);
    const auto back = certificate_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back.certified_lower, cert.certified_lower);
    EXPECT_EQ(back.estimate, cert.estimate);
    EXPECT_EQ(back.polynomial, cert.polynomial);
    EXPECT_EQ(back.supnorm.arg_angles, cert.supnorm.arg_angles);
    EXPECT_EQ(certificate_to_json(back).dump(2), text);
  }
  const auto searched = search(small_config(2, 2));
  const auto text = certificate_to_json(searched).dump(2);
  const auto back = certificate_from_json(nlohmann::json::parse(text));
  ASSERT_TRUE(back.search.has_value());
  EXPECT_EQ(back.search->rng_seed, 42u);
  EXPECT_EQ(certificate_to_json(back).dump(2), text);
}

TEST(Certificate, RejectsWrongSchema) {
  auto j = certificate_to_json(certify(build_p2({1, -1, 1})));
  j["schema"] = "bh-cert-0";
  EXPECT_THROW(certificate_from_json(j), std::invalid_argument);
  j["schema"] = kCertificateSchema;
  j.erase("estimate");
  EXPECT_THROW(certificate_from_json(j), std::invalid_argument);
}

TEST(Search, SeededQuadraticReachesKnownBound) {
  auto cfg = small_config(2, 2);
  const auto cert = search(cfg);
  EXPECT_GE(cert.estimate, 1.1066);
  EXPECT_LE(cert.certified_lower, cert.estimate);
  EXPECT_LE(cert.certified_lower, upper_bound(2) + 1e-9);
}

TEST(Search, SingleVariableIsTrivial) {
  auto cfg = small_config(2, 1);
  const auto cert = search(cfg);
  EXPECT_EQ(cert.estimate, 1.0);
  EXPECT_EQ(cert.polynomial.terms().size(), 1u);
}

TEST(Search, FloorPropertyWithFamilySeeding) {
  for (unsigned m : {2u, 3u, 4u})
    for (std::size_t n : {static_cast<std::size_t>(m), static_cast<std::size_t>(m) + 1}) {
      auto cfg = small_config(m, n);
      cfg.restarts = 2;
      cfg.eval_budget = 40;
      const auto cert = search(cfg);
      EXPECT_GE(cert.estimate, f_m(m, optimal_x(m)) - 1e-6) << "m=" << m << " n=" << n;
      EXPECT_LE(cert.certified_lower, cert.estimate);
      EXPECT_LE(cert.certified_lower, upper_bound(m) + 1e-9);
    }
}

TEST(Search, FamilySeedWithFewerVariablesThanDegree) {
  const auto basis = all_multi_indices(2, 4);
  const auto seed = detail::family_seed(4, 2, basis);
  const auto p = detail::polynomial_from_coeffs(4, 2, basis, seed);
  EXPECT_EQ(p.terms().size(), 3u);
  EXPECT_NEAR(bh_ratio(p).estimate, lower_bound(4), 1e-6);
}

TEST(Search, DeterministicAcrossRunsAndWorkers) {
  auto cfg = small_config(3, 3);
  cfg.eval_budget = 60;
  const auto a = certificate_to_json(search(cfg)).dump();
  const auto b = certificate_to_json(search(cfg)).dump();
  cfg.workers = 4;
  const auto c = certificate_to_json(search(cfg)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Search, MoreRestartsNeverHurt) {
  auto cfg = small_config(2, 3);
  cfg.seed_from_family = false;
  cfg.eval_budget = 60;
  double prev = 0.0;
  for (int r = 1; r <= 5; ++r) {
    cfg.restarts = r;
    const double best = search(cfg).estimate;
    EXPECT_GE(best, prev);
    prev = best;
  }
}

TEST(Search, ConfigValidation) {
  auto cfg = small_config(2, 2);
  cfg.restarts = 0;
  EXPECT_THROW(search(cfg), std::invalid_argument);
  cfg = small_config(2, 2);
  cfg.eval_budget = 0;
  EXPECT_THROW(search(cfg), std::invalid_argument);
  cfg = small_config(2, 2);
  cfg.step_min = cfg.step_init;
  EXPECT_THROW(search(cfg), std::invalid_argument);
}
