#ifndef BHC_WITNESS_HPP
#define BHC_WITNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bhc/family.hpp"
#include "bhc/norms.hpp"
#include "bhc/poly.hpp"
#include "bhc/poly_json.hpp"

// Pattern search over real coefficient vectors for polynomials with a large
// Bohnenblust-Hille ratio, and the certificate that records the result.

namespace bhc {

inline constexpr const char* kCertificateSchema = "bh-cert-1";

struct SearchConfig {
  unsigned m = 2;
  std::size_t num_vars = 2;
  int restarts = 32;
  std::uint64_t rng_seed = 0;
  double step_init = 0.5;
  double step_min = 1e-6;
  // Ratio evaluations allowed per restart.
  long eval_budget = 2000;
  SupNormConfig supnorm_cfg;
  // Restart 0 starts from the witness family at its optimal parameter.
  bool seed_from_family = true;
  // Worker threads; results do not depend on this.
  int workers = 1;

  void validate() const {
    if (m < 1) throw std::invalid_argument("search: m must be >= 1");
    if (num_vars < 1) throw std::invalid_argument("search: n must be >= 1");
    if (restarts < 1) throw std::invalid_argument("search: restarts must be >= 1");
    if (!(step_init > 0.0) || !(step_min > 0.0) || !(step_min < step_init))
      throw std::invalid_argument("search: need 0 < step_min < step_init");
    if (eval_budget < 1) throw std::invalid_argument("search: evaluation budget exhausted before the first evaluation");
    if (workers < 1) throw std::invalid_argument("search: workers must be >= 1");
    supnorm_cfg.validate();
  }
};

struct SearchEcho {
  unsigned m = 0;
  std::size_t num_vars = 0;
  int restarts = 0;
  std::uint64_t rng_seed = 0;
  double step_init = 0.0;
  double step_min = 0.0;
  long eval_budget = 0;
  bool seed_from_family = false;
  int best_restart = 0;
};

struct WitnessCertificate {
  HomogeneousPolynomial polynomial;
  double coeff_norm = 0.0;
  SupNormResult supnorm;
  double certified_lower = 0.0;
  double estimate = 0.0;
  SupNormConfig supnorm_cfg;
  std::optional<SearchEcho> search;
};

inline WitnessCertificate certify(const HomogeneousPolynomial& p, const SupNormConfig& cfg = {}) {
  const BhRatio r = bh_ratio(p, cfg);
  return {p, r.coeff_norm, r.supnorm, r.certified, r.estimate, cfg, std::nullopt};
}

struct RestartOutcome {
  std::vector<double> coeffs;
  double estimate = 0.0;
  long evaluations = 0;
};

namespace detail {

inline HomogeneousPolynomial polynomial_from_coeffs(unsigned m, std::size_t n,
                                                    const std::vector<MultiIndex>& basis,
                                                    const std::vector<double>& coeffs) {
  std::vector<Term> terms;
  terms.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) terms.push_back({basis[i], Complex{coeffs[i], 0.0}});
  return HomogeneousPolynomial(m, n, std::move(terms));
}

// Family witness z_3...(a z1^2 + b z2^2 + c z1 z2) with a=1, b=-1,
// c=optimal_x(m), using unit exponents on variables 3..min(N,m); leftover
// degree goes on the last used variable. A monomial factor changes neither
// the coefficient set nor the torus sup norm.
inline std::vector<double> family_seed(unsigned m, std::size_t n, const std::vector<MultiIndex>& basis) {
  std::vector<double> coeffs(basis.size(), 0.0);
  if (n == 1 || m < 2) {
    coeffs[0] = 1.0;
    return coeffs;
  }
  const std::size_t used = std::min<std::size_t>(n, m);
  std::vector<std::uint32_t> factor(n, 0);
  for (std::size_t j = 2; j < used; ++j) factor[j] = 1;
  factor[used - 1] += m - 2 - static_cast<unsigned>(used - 2);
  auto place = [&](std::uint32_t e1, std::uint32_t e2, double c) {
    std::vector<std::uint32_t> exps = factor;
    exps[0] += e1;
    exps[1] += e2;
    const MultiIndex alpha(std::move(exps));
    auto it = std::lower_bound(basis.begin(), basis.end(), alpha);
    coeffs[static_cast<std::size_t>(it - basis.begin())] = c;
  };
  place(2, 0, 1.0);
  place(0, 2, -1.0);
  place(1, 1, optimal_x(m));
  return coeffs;
}

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// One pattern-search restart: perturb one coefficient at a time by +-step,
/// keep the first improvement, halve the step after a sweep with none.
/// Depends only on (cfg, restart index).
inline RestartOutcome search_restart(const SearchConfig& cfg, int restart) {
  const auto basis = all_multi_indices(cfg.num_vars, cfg.m);
  SupNormConfig norm_cfg = cfg.supnorm_cfg;
  norm_cfg.parallel_chunks = 1;

  RestartOutcome out;
  if (restart == 0 && cfg.seed_from_family) {
    out.coeffs = detail::family_seed(cfg.m, cfg.num_vars, basis);
  } else {
    std::mt19937_64 gen(cfg.rng_seed + static_cast<std::uint64_t>(restart));
    out.coeffs.resize(basis.size());
    for (double& c : out.coeffs) c = -2.0 + 4.0 * detail::uniform01(gen);
  }

  auto objective = [&](const std::vector<double>& coeffs) {
    ++out.evaluations;
    const auto p = detail::polynomial_from_coeffs(cfg.m, cfg.num_vars, basis, coeffs);
    if (p.is_zero()) return -std::numeric_limits<double>::infinity();
    return bh_ratio(p, norm_cfg).estimate;
  };

  out.estimate = objective(out.coeffs);
  double step = cfg.step_init;
  std::vector<double> trial;
  while (step >= cfg.step_min && out.evaluations < cfg.eval_budget) {
    bool improved = false;
    for (std::size_t i = 0; i < out.coeffs.size() && out.evaluations < cfg.eval_budget; ++i) {
      for (double sign : {1.0, -1.0}) {
        if (out.evaluations >= cfg.eval_budget) break;
        trial = out.coeffs;
        trial[i] += sign * step;
        const double v = objective(trial);
        if (v > out.estimate) {
          out.coeffs = trial;
          out.estimate = v;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return out;
}

/// Runs all restarts (in parallel across cfg.workers) and certifies the best
/// one: highest estimate, ties to the lowest restart index.
inline WitnessCertificate search(const SearchConfig& cfg) {
  cfg.validate();
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < cfg.restarts; r = next++) outcomes[static_cast<std::size_t>(r)] = search_restart(cfg, r);
  };
  const int nworkers = std::min(cfg.workers, cfg.restarts);
  if (nworkers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  int best = 0;
  for (int r = 1; r < cfg.restarts; ++r)
    if (outcomes[static_cast<std::size_t>(r)].estimate > outcomes[static_cast<std::size_t>(best)].estimate) best = r;

  const auto basis = all_multi_indices(cfg.num_vars, cfg.m);
  auto cert = certify(detail::polynomial_from_coeffs(cfg.m, cfg.num_vars, basis, outcomes[static_cast<std::size_t>(best)].coeffs),
                      cfg.supnorm_cfg);
  cert.search = SearchEcho{cfg.m,        cfg.num_vars,    cfg.restarts,         cfg.rng_seed, cfg.step_init,
                           cfg.step_min, cfg.eval_budget, cfg.seed_from_family, best};
  return cert;
}

inline nlohmann::json supnorm_config_to_json(const SupNormConfig& c) {
  return {{"grid_points_per_axis", c.grid_points_per_axis},
          {"refine_tolerance", c.refine_tolerance},
          {"max_refine_iterations", c.max_refine_iterations},
          {"refine_starts", c.refine_starts}};
}

inline nlohmann::json certificate_to_json(const WitnessCertificate& c) {
  nlohmann::json j;
  j["schema"] = kCertificateSchema;
  j["polynomial"] = polynomial_to_json(c.polynomial);
  j["coeff_norm"] = c.coeff_norm;
  j["estimate"] = c.estimate;
  j["certified_lower"] = c.certified_lower;
  j["supnorm"] = {{"lower_estimate", c.supnorm.lower_estimate},
                  {"upper_bracket", c.supnorm.upper_bracket},
                  {"arg_angles", c.supnorm.arg_angles},
                  {"grid_used", c.supnorm.grid_used},
                  {"converged", c.supnorm.converged}};
  j["supnorm_config"] = supnorm_config_to_json(c.supnorm_cfg);
  if (c.search) {
    const auto& s = *c.search;
    j["seed"] = s.rng_seed;
    j["search"] = {{"m", s.m},
                   {"n", s.num_vars},
                   {"restarts", s.restarts},
                   {"rng_seed", s.rng_seed},
                   {"step_init", s.step_init},
                   {"step_min", s.step_min},
                   {"eval_budget", s.eval_budget},
                   {"seed_from_family", s.seed_from_family},
                   {"best_restart", s.best_restart}};
  } else {
    j["seed"] = nullptr;
    j["search"] = nullptr;
  }
  return j;
}

inline WitnessCertificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", std::string{}) != kCertificateSchema)
    throw std::invalid_argument(std::string("certificate: missing or unsupported schema (expected ") +
                                kCertificateSchema + ")");
  try {
    WitnessCertificate c{polynomial_from_json(j.at("polynomial")), 0.0, {}, 0.0, 0.0, {}, std::nullopt};
    c.coeff_norm = j.at("coeff_norm").get<double>();
    c.estimate = j.at("estimate").get<double>();
    c.certified_lower = j.at("certified_lower").get<double>();
    const auto& s = j.at("supnorm");
    c.supnorm.lower_estimate = s.at("lower_estimate").get<double>();
    c.supnorm.upper_bracket = s.at("upper_bracket").get<double>();
    c.supnorm.arg_angles = s.at("arg_angles").get<std::vector<double>>();
    c.supnorm.grid_used = s.at("grid_used").get<int>();
    c.supnorm.converged = s.at("converged").get<bool>();
    const auto& sc = j.at("supnorm_config");
    c.supnorm_cfg.grid_points_per_axis = sc.at("grid_points_per_axis").get<int>();
    c.supnorm_cfg.refine_tolerance = sc.at("refine_tolerance").get<double>();
    c.supnorm_cfg.max_refine_iterations = sc.at("max_refine_iterations").get<int>();
    c.supnorm_cfg.refine_starts = sc.at("refine_starts").get<int>();
    if (!j.at("search").is_null()) {
      const auto& e = j.at("search");
      c.search = SearchEcho{e.at("m").get<unsigned>(),         e.at("n").get<std::size_t>(),
                            e.at("restarts").get<int>(),       e.at("rng_seed").get<std::uint64_t>(),
                            e.at("step_init").get<double>(),   e.at("step_min").get<double>(),
                            e.at("eval_budget").get<long>(),   e.at("seed_from_family").get<bool>(),
                            e.at("best_restart").get<int>()};
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("certificate: ") + e.what());
  }
}

}  // namespace bhc

#endif  // BHC_WITNESS_HPP
