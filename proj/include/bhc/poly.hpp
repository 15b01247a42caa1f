#ifndef BHC_POLY_HPP
#define BHC_POLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bhc {

using Complex = std::complex<double>;

// Exponent vector of a monomial z^alpha.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> exponents) : exps_(std::move(exponents)) {}
  MultiIndex(std::initializer_list<std::uint32_t> exponents) : exps_(exponents) {}

  std::size_t size() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t j) const { return exps_[j]; }
  std::span<const std::uint32_t> exponents() const { return exps_; }

  std::uint64_t weight() const {
    return std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0});
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t j = 0; j < exps_.size(); ++j) os << (j ? "," : "") << exps_[j];
    os << ']';
    return os.str();
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::uint32_t> exps_;
};

struct Term {
  MultiIndex alpha;
  Complex coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

/// An m-homogeneous polynomial on C^N in canonical sparse form: terms sorted
/// by exponent vector, no exact zero coefficients, no repeated exponents.
/// Immutable once built.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial(unsigned degree, std::size_t num_vars, std::vector<Term> terms)
      : degree_(degree), num_vars_(num_vars) {
    if (degree == 0) throw std::invalid_argument("polynomial degree must be positive");
    if (num_vars == 0) throw std::invalid_argument("polynomial needs at least one variable");
    for (const auto& t : terms) {
      if (t.alpha.size() != num_vars)
        throw std::invalid_argument("term " + t.alpha.to_string() + " has " +
                                    std::to_string(t.alpha.size()) + " exponents, expected " +
                                    std::to_string(num_vars));
      if (t.alpha.weight() != degree)
        throw std::invalid_argument("term " + t.alpha.to_string() + " has weight " +
                                    std::to_string(t.alpha.weight()) + ", expected degree " +
                                    std::to_string(degree));
      if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
        throw std::invalid_argument("term " + t.alpha.to_string() + " has a non-finite coefficient");
    }
    std::erase_if(terms, [](const Term& t) { return t.coeff == Complex{}; });
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.alpha < y.alpha; });
    auto dup = std::adjacent_find(terms.begin(), terms.end(),
                                  [](const Term& x, const Term& y) { return x.alpha == y.alpha; });
    if (dup != terms.end())
      throw std::invalid_argument("duplicate term " + dup->alpha.to_string());
    terms_ = std::move(terms);
  }

  unsigned degree() const { return degree_; }
  std::size_t num_vars() const { return num_vars_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const HomogeneousPolynomial&, const HomogeneousPolynomial&) = default;

 private:
  unsigned degree_;
  std::size_t num_vars_;
  std::vector<Term> terms_;
};

namespace detail {

inline Complex int_power(Complex z, std::uint32_t k) {
  Complex r{1.0, 0.0};
  while (k) {
    if (k & 1u) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

// Neumaier's compensated sum.
inline double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

inline Complex evaluate(const HomogeneousPolynomial& p, std::span<const Complex> z) {
  if (z.size() != p.num_vars())
    throw std::invalid_argument("evaluation point has " + std::to_string(z.size()) +
                                " coordinates, polynomial has " + std::to_string(p.num_vars()) +
                                " variables");
  Complex sum{};
  for (const auto& t : p.terms()) {
    Complex mono = t.coeff;
    for (std::size_t j = 0; j < z.size(); ++j)
      if (t.alpha[j]) mono *= detail::int_power(z[j], t.alpha[j]);
    sum += mono;
  }
  return sum;
}

/// P(e^{i theta_1}, ..., e^{i theta_N}).
inline Complex evaluate_on_torus(const HomogeneousPolynomial& p, std::span<const double> angles) {
  std::vector<Complex> z(angles.size());
  std::transform(angles.begin(), angles.end(), z.begin(),
                 [](double a) { return std::polar(1.0, a); });
  return evaluate(p, z);
}

/// The Bohnenblust-Hille exponent 2m/(m+1), reduced before conversion.
inline double bh_exponent(unsigned m) {
  if (m == 0) throw std::invalid_argument("bh_exponent: degree must be positive");
  std::uint64_t num = 2ull * m, den = m + 1ull;
  std::uint64_t g = std::gcd(num, den);
  return static_cast<double>(num / g) / static_cast<double>(den / g);
}

/// (sum |c_alpha|^p)^(1/p), scaled by the largest modulus and summed in
/// ascending order with compensation. Independent of term order.
inline double coefficient_lp_norm(const HomogeneousPolynomial& p, double exponent) {
  if (!(exponent >= 1.0)) throw std::invalid_argument("coefficient_lp_norm: exponent must be >= 1");
  if (p.is_zero()) return 0.0;
  std::vector<double> mods;
  mods.reserve(p.terms().size());
  for (const auto& t : p.terms()) mods.push_back(std::abs(t.coeff));
  const double scale = *std::max_element(mods.begin(), mods.end());
  for (double& x : mods) x = std::pow(x / scale, exponent);
  std::sort(mods.begin(), mods.end());
  return scale * std::pow(detail::compensated_sum(mods), 1.0 / exponent);
}

/// Every exponent vector of weight m on N variables, in lexicographic order.
inline std::vector<MultiIndex> all_multi_indices(std::size_t num_vars, unsigned degree) {
  std::vector<MultiIndex> out;
  if (num_vars == 0) return out;
  std::vector<std::uint32_t> cur(num_vars, 0);
  auto rec = [&](auto&& self, std::size_t j, unsigned left) -> void {
    if (j + 1 == num_vars) {
      cur[j] = left;
      out.emplace_back(cur);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      cur[j] = k;
      self(self, j + 1, left - k);
    }
  };
  rec(rec, 0, degree);
  return out;
}

}  // namespace bhc

#endif  // BHC_POLY_HPP
