#ifndef BHC_POLY_JSON_HPP
#define BHC_POLY_JSON_HPP

#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bhc/poly.hpp"

// Polynomial file format:
//   {"m": <int>, "n": <int>, "terms": [{"alpha": [<int>...], "re": <float>, "im": <float>}, ...]}
// Terms are written in canonical order. Duplicate alphas are rejected on load.

namespace bhc {

inline nlohmann::json polynomial_to_json(const HomogeneousPolynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) {
    nlohmann::json alpha = nlohmann::json::array();
    for (auto e : t.alpha.exponents()) alpha.push_back(e);
    terms.push_back({{"alpha", std::move(alpha)}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
  }
  return {{"m", p.degree()}, {"n", p.num_vars()}, {"terms", std::move(terms)}};
}

inline HomogeneousPolynomial polynomial_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) -> void {
    throw std::invalid_argument("polynomial: " + msg);
  };
  if (!j.is_object()) fail("document must be a JSON object");
  for (const char* key : {"m", "n", "terms"})
    if (!j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  if (!j["m"].is_number_integer() || j["m"].get<long long>() < 1) fail("\"m\" must be a positive integer");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) fail("\"n\" must be a positive integer");
  if (!j["terms"].is_array()) fail("\"terms\" must be an array");

  const auto m = j["m"].get<unsigned>();
  const auto n = j["n"].get<std::size_t>();
  std::vector<Term> terms;
  std::set<MultiIndex> seen;
  std::size_t idx = 0;
  for (const auto& jt : j["terms"]) {
    const std::string where = "term " + std::to_string(idx++);
    if (!jt.is_object() || !jt.contains("alpha") || !jt["alpha"].is_array())
      fail(where + " needs an \"alpha\" array");
    std::vector<std::uint32_t> exps;
    for (const auto& e : jt["alpha"]) {
      if (!e.is_number_integer() || e.get<long long>() < 0)
        fail(where + " has a negative or non-integer exponent");
      exps.push_back(e.get<std::uint32_t>());
    }
    MultiIndex alpha(std::move(exps));
    if (alpha.size() != n)
      fail(where + " alpha " + alpha.to_string() + " has length " + std::to_string(alpha.size()) +
           ", expected n=" + std::to_string(n));
    if (alpha.weight() != m)
      fail(where + " alpha " + alpha.to_string() + " has weight " + std::to_string(alpha.weight()) +
           ", expected m=" + std::to_string(m));
    if (!seen.insert(alpha).second) fail(where + " duplicates alpha " + alpha.to_string());
    auto number = [&](const char* key) {
      if (!jt.contains(key) || !jt[key].is_number()) fail(where + " field \"" + key + "\" must be a number");
      return jt[key].get<double>();
    };
    terms.push_back({std::move(alpha), Complex{number("re"), number("im")}});
  }
  return HomogeneousPolynomial(m, n, std::move(terms));
}

}  // namespace bhc

#endif  // BHC_POLY_JSON_HPP
