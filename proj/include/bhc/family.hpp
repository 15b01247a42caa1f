#ifndef BHC_FAMILY_HPP
#define BHC_FAMILY_HPP

#include <cmath>
#include <algorithm>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhc/norms.hpp"
#include "bhc/poly.hpp"

// Witness family P_m(z) = z_3 ... z_m (a z_1^2 + b z_2^2 + c z_1 z_2) and the
// closed-form lower/upper bounds on the polynomial Bohnenblust-Hille
// constant D(m). Everything that involves 2^m is evaluated in log space.

namespace bhc {

struct FamilyParams {
  double a = 1.0;
  double b = -1.0;
  double c = 0.0;

  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
      throw std::invalid_argument("family parameters must be finite");
    if (!(a * b < 0.0)) throw std::invalid_argument("family parameters need ab < 0");
    if (!(std::abs(c * (a + b)) <= 4.0 * std::abs(a * b)))
      throw std::invalid_argument("family parameters need |c(a+b)| <= 4|ab|");
  }
};

struct BoundsRow {
  unsigned m = 0;
  double lower = 0.0;
  double upper = 0.0;
  double multilinear_lower = 0.0;
  double optimal_x = 0.0;
};

namespace detail {

inline void require_theorem_degree(unsigned m, const char* what) {
  if (m < 2) throw std::invalid_argument(std::string(what) + ": degree must be >= 2");
}

// log(e^x + e^y) without overflow.
inline double log_add_exp(double x, double y) {
  const double hi = std::max(x, y), lo = std::min(x, y);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace detail

inline HomogeneousPolynomial build_p2(const FamilyParams& params) {
  params.validate();
  return HomogeneousPolynomial(2, 2, {{{2, 0}, params.a}, {{0, 2}, params.b}, {{1, 1}, params.c}});
}

/// P_2 lifted to m variables by the factor z_3 ... z_m.
inline HomogeneousPolynomial build_pm(unsigned m, const FamilyParams& params) {
  detail::require_theorem_degree(m, "build_pm");
  params.validate();
  const HomogeneousPolynomial p2 = build_p2(params);
  std::vector<Term> terms;
  for (const auto& t : p2.terms()) {
    std::vector<std::uint32_t> exps(m, 1);
    exps[0] = t.alpha[0];
    exps[1] = t.alpha[1];
    terms.push_back({MultiIndex(std::move(exps)), t.coeff});
  }
  return HomogeneousPolynomial(m, m, std::move(terms));
}

/// f_m(x) = (2 + |x|^{2m/(m+1)})^{(m+1)/(2m)} / sqrt(4 + x^2); even in x.
inline double f_m(unsigned m, double x) {
  detail::require_theorem_degree(m, "f_m");
  const double p = bh_exponent(m);
  const double ax = std::abs(x);
  const double log_x = ax == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(ax);
  const double log_num = detail::log_add_exp(std::numbers::ln2, p * log_x) / p;
  const double log_den = 0.5 * detail::log_add_exp(2.0 * std::numbers::ln2, 2.0 * log_x);
  return std::exp(log_num - log_den);
}

inline double optimal_x(unsigned m) {
  detail::require_theorem_degree(m, "optimal_x");
  return std::exp2(0.5 * (m + 1.0));
}

/// log of (2 + 2^m)^{(m+1)/(2m)} / sqrt(4 + 2^{m+1}), which simplifies to
/// log1p(2^{1-m}) / (2m). Stays positive (and normal) well past m = 1000.
inline double log_lower_bound(unsigned m) {
  detail::require_theorem_degree(m, "lower_bound");
  return std::log1p(std::exp2(1.0 - m)) / (2.0 * m);
}

/// lower_bound(m) - 1 without cancellation.
inline double lower_bound_excess(unsigned m) { return std::expm1(log_lower_bound(m)); }

/// Lower bound on D(m). Rounds to exactly 1.0 once the excess falls below
/// double precision (m around 47); use lower_bound_excess() past that.
inline double lower_bound(unsigned m) { return std::exp(log_lower_bound(m)); }

/// log of (1 + 1/m)^{m-1} sqrt(m) (sqrt 2)^{m-1}.
inline double log_upper_bound(unsigned m) {
  if (m < 1) throw std::invalid_argument("upper_bound: degree must be >= 1");
  const double md = m;
  return (md - 1.0) * std::log1p(1.0 / md) + 0.5 * std::log(md) + 0.5 * (md - 1.0) * std::numbers::ln2;
}

inline double upper_bound(unsigned m) { return std::exp(log_upper_bound(m)); }

/// 2^{1 - 1/m}: the known lower bound for the real multilinear constant C(m),
/// listed for comparison.
inline double multilinear_lower_bound(unsigned m) {
  if (m < 1) throw std::invalid_argument("multilinear_lower_bound: degree must be >= 1");
  return std::exp2(1.0 - 1.0 / m);
}

inline std::vector<BoundsRow> bounds_table(unsigned m_min, unsigned m_max) {
  if (m_min < 2 || m_max < m_min)
    throw std::invalid_argument("bounds_table: need 2 <= m_min <= m_max (got " + std::to_string(m_min) + ".." +
                                std::to_string(m_max) + ")");
  std::vector<BoundsRow> rows;
  rows.reserve(m_max - m_min + 1);
  for (unsigned m = m_min; m <= m_max; ++m)
    rows.push_back({m, lower_bound(m), upper_bound(m), multilinear_lower_bound(m), optimal_x(m)});
  return rows;
}

inline void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "m,lower,upper,multilinear_lower,optimal_x\n" << std::setprecision(9);
  for (const auto& r : rows)
    os << r.m << ',' << r.lower << ',' << r.upper << ',' << r.multilinear_lower << ',' << r.optimal_x << '\n';
  os.flags(flags);
  os.precision(prec);
}

struct BhRatio {
  double estimate = 0.0;
  double certified = 0.0;
  double coeff_norm = 0.0;
  SupNormResult supnorm;
};

/// ell_{2m/(m+1)} coefficient norm over sup norm. `estimate` uses the sup
/// norm's lower estimate; `certified` uses its rigorous upper bracket and is a
/// true lower bound on D(m) up to rounding.
inline BhRatio bh_ratio(const HomogeneousPolynomial& p, const SupNormConfig& cfg = {}) {
  if (p.is_zero()) throw std::invalid_argument("bh_ratio: zero polynomial");
  BhRatio r;
  r.coeff_norm = coefficient_lp_norm(p, bh_exponent(p.degree()));
  r.supnorm = sup_norm(p, cfg);
  r.estimate = r.coeff_norm / r.supnorm.lower_estimate;
  r.certified = r.coeff_norm / r.supnorm.upper_bracket;
  return r;
}

}  // namespace bhc

#endif  // BHC_FAMILY_HPP
