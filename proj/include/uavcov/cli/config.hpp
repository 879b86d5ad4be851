#pragma once

// Run configuration: a flat `key = value` document with '#' comments.
// Boundary units (dB, dBm, degrees) are converted to linear/radians on ingest;
// emit_config writes linear keys at full precision so a round trip is exact.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uavcov/error.hpp"
#include "uavcov/model.hpp"

namespace uavcov::cli {

enum class Mode { Analytic, MonteCarlo, Both };
enum class Metric { Downlink, Cellfree, Jensen };
enum class SweepVar { None, ThetaBar, Lambda, Beta, NAntennas, Shape };
enum class Scale { Linear, Log, Db, Degrees };
enum class Format { Csv, Json };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Analytic: return "analytic";
    case Mode::MonteCarlo: return "montecarlo";
    case Mode::Both: return "both";
  }
  return "?";
}
inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Downlink: return "downlink";
    case Metric::Cellfree: return "cellfree";
    case Metric::Jensen: return "jensen";
  }
  return "?";
}
inline std::string_view to_string(SweepVar v) {
  switch (v) {
    case SweepVar::None: return "none";
    case SweepVar::ThetaBar: return "theta_bar";
    case SweepVar::Lambda: return "lambda";
    case SweepVar::Beta: return "beta";
    case SweepVar::NAntennas: return "n_antennas";
    case SweepVar::Shape: return "shape";
  }
  return "?";
}
inline std::string_view to_string(Scale s) {
  switch (s) {
    case Scale::Linear: return "linear";
    case Scale::Log: return "log";
    case Scale::Db: return "dB";
    case Scale::Degrees: return "degrees";
  }
  return "?";
}
inline std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

/// Sweep axis. start/stop are in the units of `scale` (degrees, dB, or the
/// variable's linear unit); values() returns internal units.
struct SweepAxis {
  SweepVar var = SweepVar::None;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  Scale scale = Scale::Linear;

  /// Grid points in the axis' own units (what a plot would show).
  std::vector<double> display_values() const {
    if (var == SweepVar::None) return {NAN};
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
      if (scale == Scale::Log)
        out.push_back(i == steps - 1 && steps > 1 ? stop : start * std::pow(stop / start, f));
      else
        out.push_back(i == steps - 1 && steps > 1 ? stop : start + (stop - start) * f);
    }
    return out;
  }

  double to_internal(double shown) const {
    switch (scale) {
      case Scale::Db: return db_to_linear(shown);
      case Scale::Degrees: return deg_to_rad(shown);
      default: return shown;
    }
  }

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct RunConfig {
  NetworkParams params;
  ElevationModel elevation = ElevationModel::constant(deg_to_rad(25.0));
  SweepAxis sweep;
  Mode mode = Mode::Both;
  Metric metric = Metric::Downlink;
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  double guard_tolerance = 0.05;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::string output;    // empty = standard output
  Format format = Format::Csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Raw key/value pairs with the line each came from.
struct Entry {
  std::string value;
  int line;
};

inline std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    if (out.count(key)) throw ConfigError(key, "duplicate key");
    out.emplace(key, Entry{std::string(value), line_no});
  }
  return out;
}

class Reader {
public:
  explicit Reader(std::map<std::string, Entry> kv) : kv_(std::move(kv)) {}

  std::optional<std::string> text(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second.value;
    kv_.erase(it);
    return v;
  }

  std::optional<double> number(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    double x = 0.0;
    const char* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x))
      throw ConfigError(key, "'" + *v + "' is not a finite number");
    return x;
  }

  std::optional<std::uint64_t> integer(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    std::uint64_t x = 0;
    const char* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "'" + *v + "' is not a non-negative integer");
    return x;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  void reject_leftovers() const {
    if (!kv_.empty()) {
      const auto& [key, e] = *kv_.begin();
      throw ConfigError(key, "unknown key (line " + std::to_string(e.line) + ")");
    }
  }

private:
  std::map<std::string, Entry> kv_;
};

inline void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(key, msg);
}

template <class E>
E pick(const std::string& key, const std::string& value, std::initializer_list<E> options) {
  std::string allowed;
  for (E o : options) {
    if (value == to_string(o)) return o;
    allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(o));
  }
  throw ConfigError(key, "'" + value + "' is not one of: " + allowed);
}

inline Scale default_scale(SweepVar v) {
  switch (v) {
    case SweepVar::ThetaBar: return Scale::Degrees;
    case SweepVar::Lambda: return Scale::Log;
    case SweepVar::Beta: return Scale::Db;
    default: return Scale::Linear;
  }
}

// Default range per variable, in the default scale's units.
inline SweepAxis default_axis(SweepVar v) {
  switch (v) {
    case SweepVar::ThetaBar: return {v, 5.0, 85.0, 17, Scale::Degrees};
    case SweepVar::Lambda: return {v, 1e-7, 1e-5, 9, Scale::Log};
    case SweepVar::Beta: return {v, -20.0, 10.0, 7, Scale::Db};
    case SweepVar::NAntennas: return {v, 1.0, 8.0, 8, Scale::Linear};
    case SweepVar::Shape: return {v, 1.0, 10.0, 10, Scale::Linear};
    case SweepVar::None: break;
  }
  return {};
}

}  // namespace detail

/// Network parameters and elevation model at one sweep point (value in the
/// axis' display units).
inline std::pair<NetworkParams, ElevationModel> apply_sweep(const RunConfig& cfg, double shown) {
  NetworkParams p = cfg.params;
  ElevationModel e = cfg.elevation;
  const double x = cfg.sweep.to_internal(shown);
  switch (cfg.sweep.var) {
    case SweepVar::None: break;
    case SweepVar::ThetaBar:
      e = e.is_constant() ? ElevationModel::constant(x) : ElevationModel::gamma_tan(e.shape(), x);
      break;
    case SweepVar::Lambda: p.lambda = x; break;
    case SweepVar::Beta: p.beta = x; break;
    case SweepVar::NAntennas: p.n_antennas = static_cast<int>(std::lround(x)); break;
    case SweepVar::Shape: e = ElevationModel::gamma_tan(x, e.theta_bar()); break;
  }
  p.validate();
  return {p, e};
}

/// Parse and validate a configuration document. Omitted keys take the
/// Defaults (lambda 1e-7, N 4, constant 25 deg elevation, mode both).
inline RunConfig parse_config(std::string_view text) {
  using detail::require;
  detail::Reader r(detail::tokenize(text));
  RunConfig cfg;
  NetworkParams& p = cfg.params;

  auto exclusive = [&](const char* a, const char* b) {
    if (r.has(a) && r.has(b)) throw ConfigError(b, std::string("give either ") + a + " or " + b + ", not both");
  };
  exclusive("noise_dbm", "noise_mw");
  exclusive("beta_db", "beta");
  exclusive("theta_bar_deg", "theta_bar");

  if (auto v = r.number("lambda")) {
    require(*v > 0.0, "lambda", "density must be positive");
    p.lambda = *v;
  }
  if (auto v = r.number("power_mw")) {
    require(*v > 0.0, "power_mw", "transmit power must be positive");
    p.power = *v;
  }
  if (auto v = r.integer("n_antennas")) {
    require(*v >= 1 && *v <= 64, "n_antennas", "antenna count must lie in [1, 64]");
    p.n_antennas = static_cast<int>(*v);
  }
  if (auto v = r.number("noise_dbm")) p.noise = db_to_linear(*v);
  if (auto v = r.number("noise_mw")) {
    require(*v >= 0.0, "noise_mw", "noise power must be non-negative");
    p.noise = *v;
  }
  if (auto v = r.number("alpha")) {
    require(*v > 2.0, "alpha", "path-loss exponent must satisfy alpha > 2 (interference diverges otherwise)");
    p.alpha = *v;
  }
  if (auto v = r.number("ell")) {
    require(*v >= 0.0 && *v <= 1.0, "ell", "NLoS attenuation must lie in [0, 1]");
    p.ell = *v;
  }
  if (auto v = r.number("beta_db")) p.beta = db_to_linear(*v);
  if (auto v = r.number("beta")) {
    require(*v > 0.0, "beta", "linear SINR threshold must be positive");
    p.beta = *v;
  }
  if (auto v = r.number("c1")) {
    require(*v > 0.0, "c1", "must be positive");
    p.c1 = *v;
  }
  if (auto v = r.number("c2")) {
    require(*v > 0.0, "c2", "must be positive");
    p.c2 = *v;
  }

  // Elevation model.
  const auto kind = r.text("elevation").value_or("constant");
  double theta = deg_to_rad(25.0);
  if (auto v = r.number("theta_bar_deg")) theta = deg_to_rad(*v);
  if (auto v = r.number("theta_bar")) theta = *v;
  const auto shape = r.number("shape");
  if (kind == "constant") {
    require(!shape, "shape", "only valid with elevation = gamma_tan");
    require(theta >= 0.0 && theta < kPi / 2, "theta_bar", "constant elevation must lie in [0, 90) degrees");
    cfg.elevation = ElevationModel::constant(theta);
  } else if (kind == "gamma_tan") {
    require(theta > 0.0 && theta < kPi / 2, "theta_bar", "mean elevation must lie in (0, 90) degrees");
    require(!shape || *shape > 0.0, "shape", "gamma shape must be positive");
    cfg.elevation = ElevationModel::gamma_tan(shape.value_or(3.0), theta);
  } else {
    throw ConfigError("elevation", "'" + kind + "' is not one of: constant, gamma_tan");
  }

  // Sweep axis.
  using SV = SweepVar;
  const SV var = detail::pick("sweep_var", r.text("sweep_var").value_or("none"),
                              {SV::None, SV::ThetaBar, SV::Lambda, SV::Beta, SV::NAntennas, SV::Shape});
  cfg.sweep = detail::default_axis(var);
  if (var == SV::None) {
    for (const char* k : {"sweep_start", "sweep_stop", "sweep_steps", "sweep_scale"})
      require(!r.has(k), k, "needs a sweep_var");
  } else {
    if (auto s = r.text("sweep_scale")) {
      cfg.sweep.scale = detail::pick("sweep_scale", *s, {Scale::Linear, Scale::Log, Scale::Db, Scale::Degrees});
      require(cfg.sweep.scale != Scale::Degrees || var == SV::ThetaBar, "sweep_scale", "degrees applies to theta_bar only");
      require(cfg.sweep.scale != Scale::Db || var == SV::Beta || var == SV::Lambda, "sweep_scale",
              "dB applies to beta or lambda only");
      if (cfg.sweep.scale != detail::default_scale(var) && !(r.has("sweep_start") && r.has("sweep_stop")))
        throw ConfigError("sweep_scale", "a non-default scale needs explicit sweep_start and sweep_stop");
    }
    if (auto v = r.number("sweep_start")) cfg.sweep.start = *v;
    if (auto v = r.number("sweep_stop")) cfg.sweep.stop = *v;
    if (auto v = r.integer("sweep_steps")) {
      require(*v >= 1 && *v <= 100000, "sweep_steps", "must lie in [1, 100000]");
      cfg.sweep.steps = static_cast<int>(*v);
    }
    require(cfg.sweep.scale != Scale::Log || (cfg.sweep.start > 0.0 && cfg.sweep.stop > 0.0), "sweep_start",
            "log scale needs a positive range");
    require(var != SV::Shape || !cfg.elevation.is_constant(), "sweep_var", "shape sweep needs elevation = gamma_tan");
  }

  // Run controls.
  cfg.mode = detail::pick("mode", r.text("mode").value_or("both"), {Mode::Analytic, Mode::MonteCarlo, Mode::Both});
  cfg.metric = detail::pick("metric", r.text("metric").value_or("downlink"),
                            {Metric::Downlink, Metric::Cellfree, Metric::Jensen});
  require(cfg.metric != Metric::Jensen || cfg.mode == Mode::Analytic, "metric",
          "jensen is an analytic bound; use mode = analytic");
  require(cfg.metric != Metric::Cellfree || p.noise > 0.0, "noise_mw", "cell-free coverage needs positive noise");
  if (auto v = r.integer("n_samples")) {
    require(*v >= 1, "n_samples", "must be at least 1");
    cfg.n_samples = *v;
  }
  if (auto v = r.integer("seed")) cfg.seed = *v;
  if (auto v = r.number("guard_tolerance")) {
    require(*v > 0.0 && *v < 1.0, "guard_tolerance", "must lie in (0, 1)");
    cfg.guard_tolerance = *v;
  }
  if (auto v = r.integer("workers")) cfg.workers = static_cast<unsigned>(*v);
  if (auto v = r.text("output")) cfg.output = *v;
  cfg.format = detail::pick("format", r.text("format").value_or("csv"), {Format::Csv, Format::Json});

  r.reject_leftovers();

  // Every grid point must be valid, so a bad range fails here rather than mid-run.
  for (double x : cfg.sweep.display_values()) {
    try {
      apply_sweep(cfg, x);
    } catch (const InvalidParameter& e) {
      throw ConfigError(var == SV::None ? "params" : "sweep_start", e.what());
    }
  }
  return cfg;
}

namespace detail {
inline std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace detail

/// Serialize with linear/radian keys so that parse_config(emit_config(c)) == c.
inline std::string emit_config(const RunConfig& c) {
  using detail::exact;
  std::ostringstream o;
  const NetworkParams& p = c.params;
  o << "lambda = " << exact(p.lambda) << '\n'
    << "power_mw = " << exact(p.power) << '\n'
    << "n_antennas = " << p.n_antennas << '\n'
    << "noise_mw = " << exact(p.noise) << '\n'
    << "alpha = " << exact(p.alpha) << '\n'
    << "ell = " << exact(p.ell) << '\n'
    << "beta = " << exact(p.beta) << '\n'
    << "c1 = " << exact(p.c1) << '\n'
    << "c2 = " << exact(p.c2) << '\n';
  o << "elevation = " << (c.elevation.is_constant() ? "constant" : "gamma_tan") << '\n'
    << "theta_bar = " << exact(c.elevation.theta_bar()) << '\n';
  if (!c.elevation.is_constant()) o << "shape = " << exact(c.elevation.shape()) << '\n';
  o << "sweep_var = " << to_string(c.sweep.var) << '\n';
  if (c.sweep.var != SweepVar::None) {
    o << "sweep_start = " << exact(c.sweep.start) << '\n'
      << "sweep_stop = " << exact(c.sweep.stop) << '\n'
      << "sweep_steps = " << c.sweep.steps << '\n'
      << "sweep_scale = " << to_string(c.sweep.scale) << '\n';
  }
  o << "mode = " << to_string(c.mode) << '\n'
    << "metric = " << to_string(c.metric) << '\n'
    << "n_samples = " << c.n_samples << '\n'
    << "seed = " << c.seed << '\n'
    << "guard_tolerance = " << exact(c.guard_tolerance) << '\n'
    << "workers = " << c.workers << '\n';
  if (!c.output.empty()) o << "output = " << c.output << '\n';
  o << "format = " << to_string(c.format) << '\n';
  return o.str();
}

}  // namespace uavcov::cli
