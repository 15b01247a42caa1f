#ifndef BHC_TOOLS_CLI_HPP
#define BHC_TOOLS_CLI_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bhc/family.hpp"
#include "bhc/norms.hpp"
#include "bhc/poly_json.hpp"
#include "bhc/witness.hpp"

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or input error. Machine-readable output (CSV/JSON) goes to `out`,
// everything meant for humans to `err`.

namespace bhc::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// 12 significant digits for stdout JSON.
inline nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

inline nlohmann::json num_array(const std::vector<double>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

struct NormFlags {
  int grid = 64;
  double tol = 1e-10;
  int threads = 1;

  void attach(CLI::App& app) {
    app.add_option("--grid", grid, "grid points per torus axis (K)")->capture_default_str();
    app.add_option("--tol", tol, "refinement tolerance")->capture_default_str();
    app.add_option("--threads", threads, "worker threads")->capture_default_str();
  }

  SupNormConfig config() const {
    SupNormConfig c;
    c.grid_points_per_axis = grid;
    c.refine_tolerance = tol;
    c.parallel_chunks = threads;
    c.validate();
    return c;
  }
};

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds and witness polynomials for the polynomial Bohnenblust-Hille constants", "bhc"};
  app.require_subcommand(1, 1);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "table of lower/upper bounds on D(m)");
  unsigned b_from = 2, b_to = 10;
  std::string b_format = "csv";
  bounds->add_option("--from", b_from)->capture_default_str();
  bounds->add_option("--to", b_to)->capture_default_str();
  bounds->add_option("--format", b_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  // ratio
  auto* ratio = app.add_subcommand("ratio", "BH ratio of a polynomial file");
  std::string r_file;
  detail::NormFlags r_norm;
  ratio->add_option("file", r_file, "polynomial JSON file")->required();
  r_norm.attach(*ratio);

  // verify-family
  auto* verify = app.add_subcommand("verify-family", "check the witness family numerically against the closed form");
  unsigned v_from = 2, v_to = 5;
  detail::NormFlags v_norm;
  verify->add_option("--from", v_from)->capture_default_str();
  verify->add_option("--to", v_to)->capture_default_str();
  v_norm.attach(*verify);

  // fm-curve
  auto* curve = app.add_subcommand("fm-curve", "sample f_m(x) log-uniformly");
  unsigned c_m = 2;
  double c_xmin = 1e-3, c_xmax = 1e6;
  int c_points = 200;
  curve->add_option("--m", c_m)->required();
  curve->add_option("--xmin", c_xmin)->capture_default_str();
  curve->add_option("--xmax", c_xmax)->capture_default_str();
  curve->add_option("--points", c_points)->capture_default_str();

  // search
  auto* srch = app.add_subcommand("search", "pattern search for witness polynomials");
  SearchConfig s_cfg;
  detail::NormFlags s_norm;
  std::string s_out = "bh-certificate.json";
  bool s_no_family = false;
  srch->add_option("--m", s_cfg.m)->required();
  srch->add_option("--n", s_cfg.num_vars)->required();
  srch->add_option("--seed", s_cfg.rng_seed)->capture_default_str();
  srch->add_option("--restarts", s_cfg.restarts)->capture_default_str();
  srch->add_option("--budget", s_cfg.eval_budget, "ratio evaluations per restart")->capture_default_str();
  srch->add_option("--step-init", s_cfg.step_init)->capture_default_str();
  srch->add_option("--step-min", s_cfg.step_min)->capture_default_str();
  srch->add_option("--out", s_out, "certificate file")->capture_default_str();
  srch->add_flag("--no-family-seed", s_no_family, "do not seed restart 0 from the witness family");
  s_norm.attach(*srch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, err, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    if (*bounds) {
      const auto rows = bounds_table(b_from, b_to);
      if (b_format == "csv") {
        write_bounds_csv(out, rows);
      } else {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows)
          j.push_back({{"m", r.m},
                       {"lower", detail::num(r.lower)},
                       {"upper", detail::num(r.upper)},
                       {"multilinear_lower", detail::num(r.multilinear_lower)},
                       {"optimal_x", detail::num(r.optimal_x)}});
        out << j.dump() << '\n';
      }
      return kOk;
    }

    if (*ratio) {
      const auto p = polynomial_from_json(detail::read_json_file(r_file));
      const auto r = bh_ratio(p, r_norm.config());
      nlohmann::json j = {{"m", p.degree()},
                          {"n", p.num_vars()},
                          {"estimate", detail::num(r.estimate)},
                          {"certified", detail::num(r.certified)},
                          {"coeff_norm", detail::num(r.coeff_norm)},
                          {"sup_lower", detail::num(r.supnorm.lower_estimate)},
                          {"sup_upper", detail::num(r.supnorm.upper_bracket)},
                          {"grid", r.supnorm.grid_used},
                          {"converged", r.supnorm.converged},
                          {"arg_angles", detail::num_array(r.supnorm.arg_angles)}};
      out << j.dump() << '\n';
      return kOk;
    }

    if (*verify) {
      if (v_from < 2 || v_to < v_from)
        throw UsageError("verify-family: need 2 <= --from <= --to (the bound starts at m = 2)");
      const auto cfg = v_norm.config();
      bool all_pass = true;
      out << "m,status,estimate,lower_bound,abs_error,sup_lower,sup_upper,closed_norm\n" << std::setprecision(12);
      for (unsigned m = v_from; m <= v_to; ++m) {
        const double c = optimal_x(m);
        const auto r = bh_ratio(build_pm(m, {1.0, -1.0, c}), cfg);
        const double target = lower_bound(m);
        const double closed = p2_closed_norm(1.0, -1.0, c);
        const double error = std::abs(r.estimate - target);
        const bool value_ok = error <= 1e-6;
        const bool bracket_ok = r.supnorm.lower_estimate <= closed * (1 + 1e-12) && closed <= r.supnorm.upper_bracket;
        const bool pass = value_ok && bracket_ok;
        all_pass = all_pass && pass;
        out << m << ',' << (pass ? "PASS" : "FAIL") << ',' << r.estimate << ',' << target << ',' << error << ','
            << r.supnorm.lower_estimate << ',' << r.supnorm.upper_bracket << ',' << closed << '\n';
        if (!value_ok)
          err << "m=" << m << ": ratio estimate " << r.estimate << " differs from the closed form by " << error
              << " (> 1e-6); the grid is too coarse to locate the maximum, try a larger --grid\n";
        if (!bracket_ok)
          err << "m=" << m << ": sup-norm bracket [" << r.supnorm.lower_estimate << ", " << r.supnorm.upper_bracket
              << "] does not contain the closed-form norm " << closed << "\n";
      }
      err << (all_pass ? "all PASS\n" : "verification FAILED\n");
      return all_pass ? kOk : kVerifyFailed;
    }

    if (*curve) {
      if (c_m < 2) throw UsageError("fm-curve: --m must be >= 2");
      if (!(c_xmin > 0.0) || !(c_xmax >= c_xmin) || !std::isfinite(c_xmax))
        throw UsageError("fm-curve: need 0 < --xmin <= --xmax");
      if (c_points < 1) throw UsageError("fm-curve: --points must be >= 1");
      std::vector<double> xs;
      const double lo = std::log(c_xmin), hi = std::log(c_xmax);
      for (int i = 0; i < c_points; ++i)
        xs.push_back(c_points == 1 ? c_xmin : std::exp(lo + (hi - lo) * i / (c_points - 1)));
      const double xstar = optimal_x(c_m);
      const bool insert = xstar >= c_xmin && xstar <= c_xmax;
      out << "x,f,is_optimum\n" << std::setprecision(12);
      bool placed = !insert;
      for (double x : xs) {
        if (!placed && xstar <= x) {
          out << xstar << ',' << f_m(c_m, xstar) << ",1\n";
          placed = true;
          if (x == xstar) continue;
        }
        out << x << ',' << f_m(c_m, x) << ",0\n";
      }
      if (!placed) out << xstar << ',' << f_m(c_m, xstar) << ",1\n";
      return kOk;
    }

    if (*srch) {
      s_cfg.supnorm_cfg = s_norm.config();
      s_cfg.supnorm_cfg.parallel_chunks = 1;
      s_cfg.workers = s_norm.threads;
      s_cfg.seed_from_family = !s_no_family;
      const auto cert = search(s_cfg);
      {
        std::ofstream f(s_out, std::ios::binary);
        if (!f) throw UsageError("cannot write " + s_out);
        f << certificate_to_json(cert).dump(2) << '\n';
      }
      nlohmann::json j = {{"certificate", s_out},
                          {"estimate", detail::num(cert.estimate)},
                          {"certified_lower", detail::num(cert.certified_lower)},
                          {"sup_lower", detail::num(cert.supnorm.lower_estimate)},
                          {"sup_upper", detail::num(cert.supnorm.upper_bracket)},
                          {"best_restart", cert.search->best_restart},
                          {"lower_bound", s_cfg.m >= 2 ? detail::num(lower_bound(s_cfg.m)) : nlohmann::json(nullptr)}};
      out << j.dump() << '\n';
      err << "best estimate " << cert.estimate << " (certified " << cert.certified_lower << ") written to " << s_out
          << '\n';
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bhc::cli

#endif  // BHC_TOOLS_CLI_HPP
