#include "wvhdg/config.hpp"

#include "wvhdg/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace wvhdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE)
    throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes")
    return true;
  if (t == "false" || t == "0" || t == "no")
    return false;
  throw ConfigError("expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty())
    return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(trim(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s))
    out.push_back(parse_double(item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

struct Key {
  std::string section;
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define WV_DOUBLE(sec, key, field)                                                                                    \
  Key { sec, key, [](const RunConfig& c) { return format_double(c.field); },                                         \
        [](RunConfig& c, const std::string& v) { c.field = parse_double(v); } }
#define WV_INT(sec, key, field)                                                                                       \
  Key { sec, key, [](const RunConfig& c) { return std::to_string(c.field); },                                        \
        [](RunConfig& c, const std::string& v) { c.field = parse_int(v); } }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      Key{"problem", "kind", [](const RunConfig& c) { return to_string(c.problem); },
          [](RunConfig& c, const std::string& v) { c.problem = problem_kind_from_string(trim(v)); }},
      WV_DOUBLE("physics", "c", c),
      WV_DOUBLE("physics", "k", k),
      WV_DOUBLE("physics", "delta", delta),
      WV_DOUBLE("physics", "T", T),
      WV_DOUBLE("manufactured", "A", amplitude),
      WV_DOUBLE("manufactured", "omega", omega),
      WV_DOUBLE("manufactured", "ell", ell),
      WV_DOUBLE("initial", "psi0_amplitude", psi0_amplitude),
      WV_DOUBLE("initial", "psi1_amplitude", psi1_amplitude),
      WV_DOUBLE("source", "a", source_a),
      WV_DOUBLE("source", "alpha", source_alpha),
      WV_DOUBLE("source", "sigma", source_sigma),
      WV_INT("discretization", "p", p),
      Key{"discretization", "levels",
          [](const RunConfig& c) { return join(c.levels, [](int x) { return std::to_string(x); }); },
          [](RunConfig& c, const std::string& v) { c.levels = parse_int_list(v); }},
      WV_INT("discretization", "n", n),
      WV_DOUBLE("discretization", "tau_bar", tau_bar),
      Key{"discretization", "tau_mode",
          [](const RunConfig& c) {
            return std::string(c.tau_mode == TauMode::SingleFacet ? "single_facet" : "uniform");
          },
          [](RunConfig& c, const std::string& v) {
            const std::string t = trim(v);
            if (t == "single_facet")
              c.tau_mode = TauMode::SingleFacet;
            else if (t == "uniform")
              c.tau_mode = TauMode::Uniform;
            else
              throw ConfigError("tau_mode must be single_facet or uniform, got '" + t + "'");
          }},
      WV_DOUBLE("newmark", "gamma", gamma),
      WV_DOUBLE("newmark", "beta", beta),
      Key{"newmark", "dt_rule",
          [](const RunConfig& c) { return std::string(c.dt_rule == DtRule::Fixed ? "fixed" : "h_power"); },
          [](RunConfig& c, const std::string& v) {
            const std::string t = trim(v);
            if (t == "fixed")
              c.dt_rule = DtRule::Fixed;
            else if (t == "h_power")
              c.dt_rule = DtRule::HPower;
            else
              throw ConfigError("dt_rule must be fixed or h_power, got '" + t + "'");
          }},
      WV_DOUBLE("newmark", "dt", dt),
      WV_INT("newmark", "coarse_steps", coarse_steps),
      WV_INT("newmark", "reference_n", reference_n),
      WV_DOUBLE("newmark", "tol", tol),
      WV_INT("newmark", "s_max", s_max),
      Key{"newmark", "include_initial_forcing",
          [](const RunConfig& c) { return std::string(c.include_initial_forcing ? "true" : "false"); },
          [](RunConfig& c, const std::string& v) { c.include_initial_forcing = parse_bool(v); }},
      Key{"delta", "values", [](const RunConfig& c) { return join(c.deltas, format_double); },
          [](RunConfig& c, const std::string& v) { c.deltas = parse_double_list(v); }},
      Key{"wavefront", "snapshot_times", [](const RunConfig& c) { return join(c.snapshot_times, format_double); },
          [](RunConfig& c, const std::string& v) { c.snapshot_times = parse_double_list(v); }},
      WV_DOUBLE("wavefront", "profile_y", profile_y),
      WV_INT("wavefront", "profile_points", profile_points),
      WV_DOUBLE("wavefront", "compare_k", compare_k),
      Key{"output", "dir", [](const RunConfig& c) { return c.output_dir; },
          [](RunConfig& c, const std::string& v) { c.output_dir = trim(v); }},
      Key{"output", "format",
          [](const RunConfig& c) { return std::string(c.format == OutputFormat::Csv ? "csv" : "vtk"); },
          [](RunConfig& c, const std::string& v) {
            const std::string t = trim(v);
            if (t == "csv")
              c.format = OutputFormat::Csv;
            else if (t == "vtk")
              c.format = OutputFormat::Vtk;
            else
              throw ConfigError("format must be csv or vtk, got '" + t + "'");
          }},
  };
  return table;
}

#undef WV_DOUBLE
#undef WV_INT

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : keys())
    if (k.section == section && k.name == name)
      return &k;
  return nullptr;
}

struct Line {
  int number;
  std::string section, key, value;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::stringstream ss(text);
  std::string raw;
  std::string section;
  int number = 0;
  while (std::getline(ss, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(number) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(number) + ": key outside of any section");
    out.push_back({number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return out;
}

} // namespace

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s))
    out.push_back(parse_int(item));
  return out;
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
  case ProblemKind::HConvergence:
    return "h_convergence";
  case ProblemKind::DeltaConvergence:
    return "delta_convergence";
  case ProblemKind::Wavefront:
    return "wavefront";
  case ProblemKind::Custom:
    return "custom";
  }
  return "custom";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "h_convergence")
    return ProblemKind::HConvergence;
  if (s == "delta_convergence")
    return ProblemKind::DeltaConvergence;
  if (s == "wavefront")
    return ProblemKind::Wavefront;
  if (s == "custom")
    return ProblemKind::Custom;
  throw ConfigError("unknown problem kind '" + s + "'");
}

RunConfig default_config(ProblemKind kind) {
  using std::numbers::pi;
  RunConfig c;
  c.problem = kind;
  switch (kind) {
  case ProblemKind::HConvergence:
    c.c = 100.0;
    c.delta = 6e-9;
    c.k = 0.5;
    c.T = 1.0;
    c.amplitude = 1e-2;
    c.omega = 3.5 * pi;
    c.ell = pi;
    c.p = 1;
    c.levels = {4, 8, 16, 32};
    c.output_dir = "out/h_convergence";
    break;
  case ProblemKind::DeltaConvergence:
    c.c = 1.0;
    c.k = 0.3;
    c.T = 1.0;
    c.psi0_amplitude = 1e-2;
    c.psi1_amplitude = 1.0;
    c.p = 1;
    c.n = 8;
    // tau_bar = 1 lets the discrete dpsi overshoot enough to degenerate 1 + 2k dpsi before T.
    c.tau_bar = 10.0;
    c.deltas = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
    c.output_dir = "out/delta_convergence";
    break;
  case ProblemKind::Wavefront:
    c.c = 1500.0;
    c.delta = 6e-9;
    c.k = -10.0;
    c.T = 2e-4;
    c.source_a = 400.0;
    c.source_alpha = 5e4;
    c.source_sigma = 3e-2;
    c.p = 5;
    c.n = 16;
    c.gamma = 0.85;
    c.beta = 0.45;
    c.dt_rule = DtRule::Fixed;
    c.dt = 1e-6;
    c.snapshot_times = {5e-5, 2e-4};
    c.profile_y = 0.5;
    c.profile_points = 401;
    c.compare_k = 0.0;
    c.output_dir = "out/wavefront";
    break;
  case ProblemKind::Custom:
    c.psi1_amplitude = 1.0;
    c.n = 8;
    c.output_dir = "out/run";
    break;
  }
  return c;
}

RunConfig parse_config(const std::string& text) {
  const std::vector<Line> lines = tokenize(text);
  ProblemKind kind = ProblemKind::Custom;
  for (const auto& l : lines)
    if (l.section == "problem" && l.key == "kind")
      kind = problem_kind_from_string(l.value);

  RunConfig cfg = default_config(kind);
  for (const auto& l : lines) {
    const Key* k = find_key(l.section, l.key);
    if (!k)
      throw ConfigError("line " + std::to_string(l.number) + ": unknown key '" + l.section + "." + l.key + "'");
    try {
      k->set(cfg, l.value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(l.number) + " (" + l.section + "." + l.key + "): " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty())
        out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.name + " = " + k.get(cfg) + "\n";
  }
  return out;
}

void validate_config(const RunConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok)
      throw ConfigError(msg);
  };
  require(c.c > 0.0 && std::isfinite(c.c), "physics.c must be positive");
  require(std::isfinite(c.k), "physics.k must be finite");
  require(c.delta >= 0.0 && std::isfinite(c.delta), "physics.delta must be nonnegative");
  require(c.T > 0.0 && std::isfinite(c.T), "physics.T must be positive");
  require(c.p >= 0 && c.p <= 8, "discretization.p must lie in 0..8");
  require(c.n >= 1, "discretization.n must be at least 1");
  for (int n : c.levels)
    require(n >= 1, "discretization.levels must be positive");
  for (std::size_t i = 1; i < c.levels.size(); ++i)
    require(c.levels[i] > c.levels[i - 1], "discretization.levels must be increasing");
  require(c.tau_bar > 0.0 && std::isfinite(c.tau_bar), "discretization.tau_bar must be positive");
  require(c.gamma >= 0.0 && c.gamma <= 1.0, "newmark.gamma must lie in [0, 1]");
  require(c.beta >= 0.0 && c.beta <= 0.5, "newmark.beta must lie in [0, 1/2]");
  require(c.dt > 0.0 && std::isfinite(c.dt), "newmark.dt must be positive");
  require(c.coarse_steps >= 1, "newmark.coarse_steps must be at least 1");
  require(c.reference_n >= 1, "newmark.reference_n must be at least 1");
  require(c.tol > 0.0, "newmark.tol must be positive");
  require(c.s_max >= 1, "newmark.s_max must be at least 1");
  for (double d : c.deltas)
    require(d >= 0.0 && std::isfinite(d), "delta.values must be nonnegative");
  for (double t : c.snapshot_times)
    require(t >= 0.0 && t <= c.T * (1.0 + 1e-12), "wavefront.snapshot_times must lie in [0, T]");
  require(c.profile_points >= 2, "wavefront.profile_points must be at least 2");
  require(c.source_sigma > 0.0, "source.sigma must be positive");
  require(c.source_alpha >= 0.0, "source.alpha must be nonnegative");
}

} // namespace wvhdg
