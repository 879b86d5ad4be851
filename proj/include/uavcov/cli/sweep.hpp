#pragma once

// Sweep execution and result tables (CSV / JSON).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavcov/analytic.hpp"
#include "uavcov/cli/config.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/parallel.hpp"

namespace uavcov::cli {

struct PointResult {
  double sweep_value = NAN;  // in the axis' display units; NaN without a sweep
  std::optional<analytic::CoverageResult> analytic;
  std::optional<mc::CoverageEstimate> mc;
  double wall_ms = 0.0;
  std::string error;  // numeric failure at this point, empty if none

  /// (p_mc - p_analytic) / se. The standard error is floored at the Bernoulli
  /// error implied by the analytic value, so an all-success run (se = 0)
  /// still gets a meaningful score.
  std::optional<double> z_score() const {
    if (!analytic || !mc) return std::nullopt;
    const double pa = analytic->value;
    const double se = std::max(mc->std_error, std::sqrt(pa * (1.0 - pa) / static_cast<double>(mc->n_samples)));
    const double diff = mc->mean - pa;
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  }
};

struct SweepResult {
  SweepVar var = SweepVar::None;
  std::vector<PointResult> rows;

  bool ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const PointResult& r) { return r.error.empty(); });
  }
};

/// Evaluate one parameter set according to the config's mode and metric.
/// Numeric failures are captured in PointResult::error.
inline PointResult evaluate_point(const RunConfig& cfg, const NetworkParams& p, const ElevationModel& elev,
                                  std::uint64_t seed, unsigned mc_workers) {
  PointResult out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (cfg.mode != Mode::MonteCarlo) {
      switch (cfg.metric) {
        case Metric::Downlink: out.analytic = analytic::downlink_coverage(p, elev); break;
        case Metric::Cellfree: out.analytic = analytic::cellfree_coverage(p, elev); break;
        case Metric::Jensen: out.analytic = analytic::jensen_bound(p, elev); break;
      }
    }
    if (cfg.mode != Mode::Analytic) {
      mc::McOptions opt;
      opt.n_samples = cfg.n_samples;
      opt.master_seed = seed;
      opt.guard_tolerance = cfg.guard_tolerance;
      opt.workers = mc_workers;
      out.mc = cfg.metric == Metric::Cellfree ? mc::estimate_cellfree(p, elev, opt) : mc::estimate_downlink(p, elev, opt);
    }
  } catch (const Error& e) {
    out.error = e.what();
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Run every point of the sweep. Points are evaluated concurrently but rows
/// come back in grid order, and each point's Monte Carlo seed is derived from
/// (seed, index), so output does not depend on the worker count.
inline SweepResult run_sweep(const RunConfig& cfg) {
  const auto grid = cfg.sweep.display_values();
  SweepResult res;
  res.var = cfg.sweep.var;
  res.rows.resize(grid.size());
  const unsigned workers = resolve_workers(cfg.workers);
  const unsigned outer = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));
  const unsigned inner = std::max(1u, workers / std::max(1u, outer));

  parallel_for(grid.size(), outer, [&](std::size_t i) {
    const auto [p, elev] = apply_sweep(cfg, grid[i]);
    const std::uint64_t seed = cfg.sweep.var == SweepVar::None ? cfg.seed : random::derive_seed(cfg.seed, i);
    res.rows[i] = evaluate_point(cfg, p, elev, seed, inner);
    res.rows[i].sweep_value = grid[i];
  });
  return res;
}

namespace detail {

inline std::string csv_number(std::optional<double> x) {
  if (!x || std::isnan(*x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", *x);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "sweep_var,sweep_value,p_analytic,p_mc,mc_stderr,z_score,n_samples,seed,wall_ms,error";

/// CSV with a fixed header. Columns not produced by the run's mode are empty.
inline void write_csv(std::ostream& os, const SweepResult& res) {
  using detail::csv_number;
  os << kCsvHeader << '\n';
  for (const PointResult& r : res.rows) {
    os << to_string(res.var) << ',' << csv_number(r.sweep_value) << ','
       << csv_number(r.analytic ? std::optional(r.analytic->value) : std::nullopt) << ','
       << csv_number(r.mc ? std::optional(r.mc->mean) : std::nullopt) << ','
       << csv_number(r.mc ? std::optional(r.mc->std_error) : std::nullopt) << ',' << csv_number(r.z_score()) << ',';
    if (r.mc)
      os << r.mc->n_samples << ',' << r.mc->seed;
    else
      os << ',';
    os << ',' << csv_number(r.wall_ms) << ',' << detail::csv_quote(r.error) << '\n';
  }
}

inline nlohmann::json to_json(const PointResult& r, SweepVar var) {
  using nlohmann::json;
  auto num = [](std::optional<double> x) { return x && std::isfinite(*x) ? json(*x) : json(nullptr); };
  json j;
  j["sweep_var"] = std::string(to_string(var));
  j["sweep_value"] = num(r.sweep_value);
  j["p_analytic"] = r.analytic ? json(r.analytic->value) : json(nullptr);
  j["analytic_method"] = r.analytic ? json(std::string(analytic::to_string(r.analytic->method))) : json(nullptr);
  j["analytic_error"] = r.analytic ? json(r.analytic->numerical_error) : json(nullptr);
  j["p_mc"] = r.mc ? json(r.mc->mean) : json(nullptr);
  j["mc_stderr"] = r.mc ? json(r.mc->std_error) : json(nullptr);
  j["z_score"] = num(r.z_score());
  j["n_samples"] = r.mc ? json(r.mc->n_samples) : json(nullptr);
  j["seed"] = r.mc ? json(r.mc->seed) : json(nullptr);
  j["wall_ms"] = r.wall_ms;
  j["error"] = r.error.empty() ? json(nullptr) : json(r.error);
  return j;
}

inline nlohmann::json to_json(const SweepResult& res, const RunConfig& cfg) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : res.rows) rows.push_back(to_json(r, res.var));
  return {{"mode", std::string(to_string(cfg.mode))},
          {"metric", std::string(to_string(cfg.metric))},
          {"elevation", cfg.elevation.describe()},
          {"rows", std::move(rows)}};
}

}  // namespace uavcov::cli
