#ifndef BHC_NORMS_HPP
#define BHC_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bhc/poly.hpp"

// Supremum norm of a homogeneous polynomial on the closed unit polydisc.
//
// By the maximum modulus principle applied in each coordinate, the sup over
// the polydisc equals the sup over the torus |z_j| = 1, so everything here
// works with angles theta in [0, 2pi)^N.
//
// Two exact reductions shrink the search space before gridding:
//  * a coordinate whose exponent is the same in every term only contributes
//    a unimodular factor and is pinned at angle 0;
//  * homogeneity gives |P(e^{i phi} z)| = |P(z)|, so the first remaining
//    coordinate (the phase anchor) is also pinned at 0.
// The grid then runs over the rest ("gridded" coordinates).

namespace bhc {

struct SupNormConfig {
  int grid_points_per_axis = 64;
  double refine_tolerance = 1e-10;
  int max_refine_iterations = 200;
  int parallel_chunks = 1;
  // Number of grid local maxima used as refinement starts.
  int refine_starts = 8;

  void validate() const {
    if (grid_points_per_axis < 2) throw std::invalid_argument("sup norm: grid needs K >= 2");
    if (!(refine_tolerance > 0.0)) throw std::invalid_argument("sup norm: refine tolerance must be > 0");
    if (max_refine_iterations < 1) throw std::invalid_argument("sup norm: max_refine_iterations must be >= 1");
    if (parallel_chunks < 1) throw std::invalid_argument("sup norm: parallel_chunks must be >= 1");
    if (refine_starts < 1) throw std::invalid_argument("sup norm: refine_starts must be >= 1");
  }
};

struct SupNormResult {
  double lower_estimate = 0.0;
  double upper_bracket = 0.0;
  std::vector<double> arg_angles;
  int grid_used = 0;
  bool converged = false;
};

struct GridMax {
  double value = 0.0;
  std::vector<double> angles;
};

struct RefineResult {
  double value = 0.0;
  std::vector<double> angles;
  int sweeps = 0;
  bool converged = false;
};

struct TorusLayout {
  std::vector<std::size_t> gridded;
  std::optional<std::size_t> phase_anchor;
};

inline constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 32;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline TorusLayout torus_layout(const HomogeneousPolynomial& p) {
  TorusLayout layout;
  const auto terms = p.terms();
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    bool constant = std::all_of(terms.begin(), terms.end(),
                                [&](const Term& t) { return t.alpha[j] == terms.front().alpha[j]; });
    if (constant) continue;
    if (!layout.phase_anchor)
      layout.phase_anchor = j;
    else
      layout.gridded.push_back(j);
  }
  return layout;
}

/// Per-coordinate bound L_j = sum_alpha |c_alpha| alpha_j on |d/dtheta_j P(e^{i theta})|.
inline std::vector<double> coordinate_lipschitz_bounds(const HomogeneousPolynomial& p) {
  std::vector<double> out(p.num_vars(), 0.0);
  for (const auto& t : p.terms())
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += std::abs(t.coeff) * t.alpha[j];
  return out;
}

inline double torus_lipschitz_bound(const HomogeneousPolynomial& p) {
  auto per = coordinate_lipschitz_bounds(p);
  return detail::compensated_sum(per);
}

namespace detail {

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

inline std::uint64_t checked_grid_size(std::size_t dims, int k) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    if (total > kMaxGridPoints / static_cast<std::uint64_t>(k))
      throw std::length_error("sup norm: grid too large (" + std::to_string(k) + "^" +
                              std::to_string(dims) +
                              " points over the free coordinates); use fewer variables or a smaller K");
    total *= static_cast<std::uint64_t>(k);
  }
  return total;
}

// Evaluates |P| on the uniform K-grid over the gridded coordinates using
// exact root-of-unity phase indices.
class GridScanner {
 public:
  GridScanner(const HomogeneousPolynomial& p, const TorusLayout& layout, int k)
      : k_(k), dims_(layout.gridded.size()), gridded_(layout.gridded) {
    total_ = checked_grid_size(dims_, k);
    inner_ = dims_ == 0 ? 1 : static_cast<std::uint64_t>(k);
    outer_ = total_ / inner_;
    roots_.resize(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) roots_[s] = std::polar(1.0, kTwoPi * s / k);
    for (const auto& t : p.terms()) {
      coeffs_.push_back(t.coeff);
      for (std::size_t g : gridded_) exps_.push_back(static_cast<int>(t.alpha[g] % static_cast<std::uint32_t>(k)));
    }
  }

  std::uint64_t total() const { return total_; }
  std::uint64_t outer() const { return outer_; }
  std::size_t dims() const { return dims_; }
  int k() const { return k_; }

  struct Best {
    double value = -1.0;
    std::uint64_t index = 0;
  };

  // Scans outer indices [lo, hi); strict '>' keeps the earliest index on ties.
  Best scan(std::uint64_t lo, std::uint64_t hi, std::span<double> store) const {
    Best best;
    const std::size_t nterms = coeffs_.size();
    std::vector<int> idx(nterms);
    std::vector<std::uint32_t> digits(dims_);
    for (std::uint64_t o = lo; o < hi; ++o) {
      // Digits of the outer index (all but the last gridded coordinate).
      std::uint64_t rem = o;
      for (std::size_t i = dims_ > 0 ? dims_ - 1 : 0; i-- > 0;) {
        digits[i] = static_cast<std::uint32_t>(rem % k_);
        rem /= k_;
      }
      for (std::size_t t = 0; t < nterms; ++t) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i + 1 < dims_; ++i)
          s += static_cast<std::uint64_t>(exps_[t * dims_ + i]) * digits[i];
        idx[t] = static_cast<int>(s % k_);
      }
      for (std::uint64_t in = 0; in < inner_; ++in) {
        Complex sum{};
        for (std::size_t t = 0; t < nterms; ++t) sum += coeffs_[t] * roots_[idx[t]];
        const double v = std::abs(sum);
        const std::uint64_t lin = o * inner_ + in;
        if (!store.empty()) store[lin] = v;
        if (v > best.value) best = {v, lin};
        if (dims_ > 0)
          for (std::size_t t = 0; t < nterms; ++t) {
            idx[t] += exps_[t * dims_ + dims_ - 1];
            if (idx[t] >= k_) idx[t] -= k_;
          }
      }
    }
    return best;
  }

  std::vector<double> angles_of(std::uint64_t lin, std::size_t num_vars) const {
    std::vector<double> angles(num_vars, 0.0);
    for (std::size_t i = dims_; i-- > 0;) {
      angles[gridded_[i]] = kTwoPi * static_cast<double>(lin % k_) / k_;
      lin /= k_;
    }
    return angles;
  }

  // Linear index of the neighbour one step along gridded dimension `dim`.
  std::uint64_t neighbour(std::uint64_t lin, std::size_t dim, int step) const {
    std::uint64_t stride = 1;
    for (std::size_t i = dims_ - 1; i > dim; --i) stride *= k_;
    const auto digit = static_cast<int>((lin / stride) % k_);
    const int moved = (digit + step + k_) % k_;
    return lin - static_cast<std::uint64_t>(digit) * stride + static_cast<std::uint64_t>(moved) * stride;
  }

 private:
  int k_;
  std::size_t dims_;
  std::vector<std::size_t> gridded_;
  std::uint64_t total_ = 1, inner_ = 1, outer_ = 1;
  std::vector<Complex> roots_;
  std::vector<Complex> coeffs_;
  std::vector<int> exps_;
};

// Chunks the outer range across worker threads and max-reduces in chunk
// order, so the result does not depend on the number of workers.
inline GridScanner::Best parallel_scan(const GridScanner& scanner, int chunks, std::span<double> store) {
  const std::uint64_t outer = scanner.outer();
  const auto nchunks = static_cast<std::uint64_t>(std::max<std::int64_t>(
      1, std::min<std::int64_t>(chunks, static_cast<std::int64_t>(outer))));
  std::vector<GridScanner::Best> partial(nchunks);
  auto bounds = [&](std::uint64_t c) { return outer * c / nchunks; };
  if (nchunks == 1) {
    partial[0] = scanner.scan(0, outer, store);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(nchunks);
    for (std::uint64_t c = 0; c < nchunks; ++c)
      workers.emplace_back([&, c] { partial[c] = scanner.scan(bounds(c), bounds(c + 1), store); });
    for (auto& w : workers) w.join();
  }
  GridScanner::Best best;
  for (const auto& b : partial)
    if (b.value > best.value) best = b;
  return best;
}

// Grid points that are >= all axis neighbours, best first, ties by index.
inline std::vector<std::uint64_t> grid_local_maxima(const GridScanner& scanner,
                                                    std::span<const double> values,
                                                    std::size_t limit) {
  std::vector<std::uint64_t> maxima;
  for (std::uint64_t lin = 0; lin < values.size(); ++lin) {
    bool is_max = true;
    for (std::size_t d = 0; d < scanner.dims() && is_max; ++d)
      for (int step : {-1, 1})
        if (values[scanner.neighbour(lin, d, step)] > values[lin]) {
          is_max = false;
          break;
        }
    if (is_max) maxima.push_back(lin);
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return values[a] > values[b]; });
  if (maxima.size() > limit) maxima.resize(limit);
  return maxima;
}

// Golden-section search for a maximum of f on [lo, hi].
template <typename F>
double golden_section_argmax(F&& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

}  // namespace detail

/// Maximum of |P| over the K^N uniform angle grid, with the lexicographically
/// smallest maximizing angle vector. A lower bound on the sup norm.
inline GridMax torus_grid_max(const HomogeneousPolynomial& p, int k, int chunks = 1) {
  if (k < 2) throw std::invalid_argument("torus_grid_max: K must be >= 2");
  const auto layout = torus_layout(p);
  detail::GridScanner scanner(p, layout, k);
  const auto best = detail::parallel_scan(scanner, chunks, {});
  return {std::max(best.value, 0.0), scanner.angles_of(best.index, p.num_vars())};
}

/// Cyclic coordinate ascent on theta -> |P(e^{i theta})| with a golden-section
/// line search over [theta_j - halfwidth, theta_j + halfwidth]. A step is only
/// taken if it increases |P|, so the returned value never drops below the
/// starting one. Stops when a sweep gains less than `tol`.
inline RefineResult refine_local(const HomogeneousPolynomial& p, std::span<const double> start,
                                 double tol, int max_iter,
                                 double halfwidth = kTwoPi / 64.0) {
  if (start.size() != p.num_vars())
    throw std::invalid_argument("refine_local: expected " + std::to_string(p.num_vars()) + " angles, got " +
                                std::to_string(start.size()));
  RefineResult res;
  res.angles.assign(start.begin(), start.end());
  for (double& a : res.angles) a = detail::wrap_angle(a);
  res.value = std::abs(evaluate_on_torus(p, res.angles));

  const auto layout = torus_layout(p);
  if (layout.gridded.empty()) {
    res.sweeps = 1;
    res.converged = true;
    return res;
  }

  const std::size_t n = p.num_vars();
  const unsigned m = p.degree();
  std::vector<Complex> line(m + 1);
  std::vector<double> trial = res.angles;

  for (res.sweeps = 1; res.sweeps <= max_iter; ++res.sweeps) {
    const double before = res.value;
    for (std::size_t j : layout.gridded) {
      // Restrict P to coordinate j: sum_k line[k] e^{i k theta_j}.
      std::fill(line.begin(), line.end(), Complex{});
      for (const auto& t : p.terms()) {
        Complex rest = t.coeff;
        for (std::size_t i = 0; i < n; ++i)
          if (i != j && t.alpha[i]) rest *= std::polar(1.0, res.angles[i] * t.alpha[i]);
        line[t.alpha[j]] += rest;
      }
      auto modulus_sq = [&](double theta) {
        const Complex w = std::polar(1.0, theta);
        Complex acc{};
        for (std::size_t k = line.size(); k-- > 0;) acc = acc * w + line[k];
        return std::norm(acc);
      };
      const double theta = res.angles[j];
      const double best = detail::golden_section_argmax(modulus_sq, theta - halfwidth, theta + halfwidth, 1e-12);
      trial = res.angles;
      trial[j] = detail::wrap_angle(best);
      const double v = std::abs(evaluate_on_torus(p, trial));
      if (v > res.value) {
        res.value = v;
        res.angles = trial;
      }
    }
    if (res.value - before < tol) {
      res.converged = true;
      break;
    }
  }
  res.sweeps = std::min(res.sweeps, max_iter);
  return res;
}

/// Lower estimate and rigorous upper bracket of ||P|| on the unit polydisc.
/// upper = (grid max) + (pi/K) * sum of L_j over gridded coordinates: every
/// torus point is, after the exact reductions, within pi/K of a grid point in
/// each gridded coordinate.
inline SupNormResult sup_norm(const HomogeneousPolynomial& p, const SupNormConfig& cfg = {}) {
  cfg.validate();
  const int k = cfg.grid_points_per_axis;
  const auto layout = torus_layout(p);
  detail::GridScanner scanner(p, layout, k);

  constexpr std::uint64_t kStoreLimit = std::uint64_t{1} << 22;
  const bool multistart = cfg.refine_starts > 1 && scanner.total() <= kStoreLimit && scanner.dims() > 0;
  std::vector<double> values(multistart ? scanner.total() : 0);
  const auto best = detail::parallel_scan(scanner, cfg.parallel_chunks, values);
  const double grid_value = std::max(best.value, 0.0);

  std::vector<std::uint64_t> starts{best.index};
  if (multistart) starts = detail::grid_local_maxima(scanner, values, static_cast<std::size_t>(cfg.refine_starts));

  RefineResult top;
  top.value = -1.0;
  for (auto s : starts) {
    auto r = refine_local(p, scanner.angles_of(s, p.num_vars()), cfg.refine_tolerance,
                          cfg.max_refine_iterations, kTwoPi / k);
    if (r.value > top.value) top = std::move(r);
  }

  const auto lips = coordinate_lipschitz_bounds(p);
  double slack = 0.0;
  for (std::size_t g : layout.gridded) slack += lips[g];
  slack *= std::numbers::pi / k;

  SupNormResult out;
  out.lower_estimate = top.value;
  out.upper_bracket = std::max(grid_value + slack, top.value);
  out.arg_angles = std::move(top.angles);
  out.grid_used = k;
  out.converged = top.converged;
  return out;
}

/// Closed-form ||a z1^2 + b z2^2 + c z1 z2|| for real a, b, c with ab < 0 and
/// |c(a+b)| <= 4|ab|. Outside that domain the formula does not apply and the
/// call fails.
inline double p2_closed_norm(double a, double b, double c) {
  const bool finite = std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
  if (!finite || !(a * b < 0.0) || !(std::abs(c * (a + b)) <= 4.0 * std::abs(a * b)))
    throw std::domain_error("p2_closed_norm: formula out of validity domain (need ab < 0 and |c(a+b)| <= 4|ab|)");
  return (std::abs(a) + std::abs(b)) * std::sqrt(1.0 + c * c / (4.0 * std::abs(a * b)));
}

}  // namespace bhc

#endif  // BHC_NORMS_HPP
