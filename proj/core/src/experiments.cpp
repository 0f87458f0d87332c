#include "wvhdg/experiments.hpp"

#include "wvhdg/errors.hpp"
#include "wvhdg/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace wvhdg {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
  return std::filesystem::path(cfg.output_dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out)
    throw IoError("error while writing '" + path.string() + "'");
}

Discretization make_discretization(const RunConfig& cfg, int n) {
  return Discretization(generate_structured_mesh(n), cfg.p, cfg.tau_bar, cfg.tau_mode);
}

} // namespace

double structured_h(int n) { return std::sqrt(2.0) / n; }

double time_step(const RunConfig& cfg, int n) {
  if (cfg.dt_rule == DtRule::Fixed)
    return cfg.dt;
  const double e = (cfg.p + 2) / 2.0;
  const double C = cfg.T / (cfg.coarse_steps * std::pow(structured_h(cfg.reference_n), e));
  const double steps = std::ceil(cfg.T / (C * std::pow(structured_h(n), e)) - 1e-9);
  return cfg.T / std::max(1.0, steps);
}

NewmarkConfig newmark_config(const RunConfig& cfg, double dt) {
  NewmarkConfig nc;
  nc.dt = dt;
  nc.gamma = cfg.gamma;
  nc.beta = cfg.beta;
  nc.tol = cfg.tol;
  nc.s_max = cfg.s_max;
  nc.include_initial_forcing = cfg.include_initial_forcing;
  return nc;
}

ManufacturedParameters manufactured_parameters(const RunConfig& cfg) {
  ManufacturedParameters m;
  m.c = cfg.c;
  m.delta = cfg.delta;
  m.k = cfg.k;
  m.T = cfg.T;
  m.A = cfg.amplitude;
  m.omega = cfg.omega;
  m.ell = cfg.ell;
  return m;
}

ProblemDefinition problem_from_config(const RunConfig& cfg) {
  switch (cfg.problem) {
  case ProblemKind::HConvergence:
    return manufactured_problem(manufactured_parameters(cfg));
  case ProblemKind::DeltaConvergence:
    return delta_problem({cfg.c, cfg.k, cfg.delta, cfg.T, cfg.psi0_amplitude, cfg.psi1_amplitude});
  case ProblemKind::Wavefront: {
    WavefrontParameters w;
    w.c = cfg.c;
    w.delta = cfg.delta;
    w.k = cfg.k;
    w.T = cfg.T;
    w.a = cfg.source_a;
    w.alpha = cfg.source_alpha;
    w.sigma = cfg.source_sigma;
    return wavefront_problem(w);
  }
  case ProblemKind::Custom: {
    ProblemDefinition p = delta_problem({cfg.c, cfg.k, cfg.delta, cfg.T, cfg.psi0_amplitude, cfg.psi1_amplitude});
    if (cfg.source_a != 0.0) {
      WavefrontParameters w;
      w.a = cfg.source_a;
      w.alpha = cfg.source_alpha;
      w.sigma = cfg.source_sigma;
      p.forcing = [w](const Point& x, double t) { return wavefront_forcing(w, x, t); };
    }
    return p;
  }
  }
  throw ConfigError("unknown problem kind");
}

ErrorReport run_h_convergence(const RunConfig& cfg, std::ostream* log) {
  validate_config(cfg);
  if (cfg.levels.empty())
    throw ConfigError("discretization.levels is empty");
  const ProblemDefinition prob = manufactured_problem(manufactured_parameters(cfg));
  ErrorReport report;
  report.degree = cfg.p;
  for (int n : cfg.levels) {
    ErrorLevel level;
    level.n = n;
    level.h = structured_h(n);
    level.dt = time_step(cfg, n);
    try {
      const Discretization disc = make_discretization(cfg, n);
      const RunResult res = run(prob, disc, newmark_config(cfg, level.dt));
      const double T = res.state.t;
      const auto exact = [&](const Point& x) { return prob.exact_psi(x, T); };
      level.err_psi = l2_error(disc, res.state.psi, exact);
      level.err_v = l2_error(disc, *res.state.velocity, [&](const Point& x) { return prob.exact_v(x, T); });
      level.err_psistar = l2_error(disc, postprocess(disc, res.state.psi, *res.state.velocity), exact);
      level.mean_iterations = res.mean_iterations();
    } catch (const Error& e) {
      level.failure = e.what();
    }
    if (log) {
      if (level.failure.empty())
        *log << "p=" << cfg.p << " n=" << n << " dt=" << level.dt << " err_psi=" << level.err_psi
             << " err_v=" << level.err_v << " err_psistar=" << *level.err_psistar
             << " mean_iterations=" << level.mean_iterations << '\n';
      else
        *log << "p=" << cfg.p << " n=" << n << " failed: " << level.failure << '\n';
    }
    report.levels.push_back(std::move(level));
  }
  if (!cfg.output_dir.empty())
    write_text(output_path(cfg, "h_convergence_p" + std::to_string(cfg.p) + ".csv"), convergence_csv(report));
  return report;
}

std::string convergence_csv(const ErrorReport& report) {
  std::string out = "h,dt,err_psi,rate_psi,err_v,rate_v,err_psistar,rate_psistar\n";
  const auto rp = report.rates_psi();
  const auto rv = report.rates_v();
  const auto rs = report.rates_psistar();
  std::string failures;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ErrorLevel& l = report.levels[i];
    if (!l.failure.empty()) {
      out += fmt(l.h) + "," + fmt(l.dt) + ",,,,,,\n";
      failures += "# level n=" + std::to_string(l.n) + " failed: " + l.failure + "\n";
      continue;
    }
    out += fmt(l.h) + "," + fmt(l.dt) + "," + fmt(l.err_psi) + "," + fmt(rp[i]) + "," + fmt(l.err_v) + "," +
           fmt(rv[i]) + "," + fmt(l.err_psistar) + "," + fmt(rs[i]) + "\n";
  }
  return out + failures;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0))
      continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  if (m < 2 || den <= 0.0)
    return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

namespace {

std::vector<std::optional<double>> delta_rates(const std::vector<DeltaLevel>& levels, bool psi) {
  std::vector<std::optional<double>> out(levels.size());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const double d0 = levels[i - 1].delta, d1 = levels[i].delta;
    const double e0 = psi ? levels[i - 1].err_psi : levels[i - 1].err_v;
    const double e1 = psi ? levels[i].err_psi : levels[i].err_v;
    if (d0 > 0.0 && d1 > 0.0 && d0 != d1 && e0 > 0.0 && e1 > 0.0)
      out[i] = std::log(e0 / e1) / std::log(d0 / d1);
  }
  return out;
}

} // namespace

std::vector<std::optional<double>> DeltaReport::rates_psi() const { return delta_rates(levels, true); }
std::vector<std::optional<double>> DeltaReport::rates_v() const { return delta_rates(levels, false); }

DeltaReport run_delta_convergence(const RunConfig& cfg, std::ostream* log) {
  validate_config(cfg);
  if (cfg.deltas.empty())
    throw ConfigError("delta.values is empty");
  DeltaReport report;
  report.degree = cfg.p;
  report.n = cfg.n;
  report.dt = time_step(cfg, cfg.n);
  const Discretization disc = make_discretization(cfg, cfg.n);
  const NewmarkConfig nc = newmark_config(cfg, report.dt);

  auto solve = [&](double delta) {
    RunConfig c = cfg;
    c.delta = delta;
    return run(problem_from_config(c), disc, nc);
  };
  const RunResult ref = solve(0.0);
  if (log)
    *log << "p=" << cfg.p << " n=" << cfg.n << " dt=" << report.dt << " reference run done\n";

  std::vector<double> ds, eps, evs;
  for (double delta : cfg.deltas) {
    DeltaLevel level;
    level.delta = delta;
    const RunResult r = delta == 0.0 ? ref : solve(delta);
    level.err_psi = l2_norm_scalar(disc, r.state.psi - ref.state.psi);
    level.err_v = l2_norm_vector(disc, *r.state.velocity - *ref.state.velocity);
    level.mean_iterations = r.mean_iterations();
    if (log)
      *log << "delta=" << delta << " err_psi=" << level.err_psi << " err_v=" << level.err_v << '\n';
    ds.push_back(delta);
    eps.push_back(level.err_psi);
    evs.push_back(level.err_v);
    report.levels.push_back(level);
  }
  report.slope_psi = loglog_slope(ds, eps);
  report.slope_v = loglog_slope(ds, evs);
  if (!cfg.output_dir.empty())
    write_text(output_path(cfg, "delta_convergence_p" + std::to_string(cfg.p) + ".csv"), delta_csv(report));
  return report;
}

std::string delta_csv(const DeltaReport& report) {
  std::string out = "delta,err_psi,rate_psi,err_v,rate_v\n";
  const auto rp = report.rates_psi();
  const auto rv = report.rates_v();
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const DeltaLevel& l = report.levels[i];
    out += fmt(l.delta) + "," + fmt(l.err_psi) + "," + fmt(rp[i]) + "," + fmt(l.err_v) + "," + fmt(rv[i]) + "\n";
  }
  return out;
}

WavefrontReport run_wavefront(const RunConfig& cfg, std::ostream* log) {
  validate_config(cfg);
  WavefrontReport report;
  report.degree = cfg.p;
  report.n = cfg.n;
  report.dt = time_step(cfg, cfg.n);
  report.k = cfg.k;
  report.compare_k = cfg.compare_k;
  const Discretization disc = make_discretization(cfg, cfg.n);
  const NewmarkConfig nc = newmark_config(cfg, report.dt);
  const TriangleBasis& basis = disc.reference().basis;

  std::vector<int> snapshot_steps;
  for (double t : cfg.snapshot_times)
    snapshot_steps.push_back(static_cast<int>(std::lround(t / report.dt)));

  const int np = cfg.profile_points;
  std::vector<Point> probes;
  for (int i = 0; i < np; ++i)
    probes.emplace_back(static_cast<double>(i) / (np - 1), cfg.profile_y);

  report.profiles.resize(cfg.snapshot_times.size());
  for (std::size_t s = 0; s < cfg.snapshot_times.size(); ++s) {
    report.profiles[s].t = snapshot_steps[s] * report.dt;
    for (const auto& x : probes)
      report.profiles[s].x.push_back(x.x());
  }

  for (int pass = 0; pass < 2; ++pass) {
    RunConfig c = cfg;
    c.k = pass == 0 ? cfg.k : cfg.compare_k;
    const ProblemDefinition prob = problem_from_config(c);
    Observer obs = [&](const State& state, int step) {
      for (std::size_t s = 0; s < snapshot_steps.size(); ++s) {
        if (snapshot_steps[s] != step)
          continue;
        auto& dst = pass == 0 ? report.profiles[s].dpsi : report.profiles[s].dpsi_compare;
        dst.clear();
        for (const auto& x : probes)
          dst.push_back(evaluate_at(disc, basis, state.dpsi, x));
        if (!cfg.output_dir.empty()) {
          const std::string ext = cfg.format == OutputFormat::Csv ? ".csv" : ".vtk";
          const std::string name = "dpsi_k" + label(c.k) + "_t" + label(report.profiles[s].t) + ext;
          export_field(disc, basis, state.dpsi, output_path(cfg, name).string(), cfg.format);
        }
      }
    };
    const RunResult res = run(prob, disc, nc, {obs});
    int max_it = 0;
    for (int it : res.iterations)
      max_it = std::max(max_it, it);
    if (pass == 0) {
      report.steps = res.steps;
      report.mean_iterations = res.mean_iterations();
      report.max_iterations = max_it;
    } else {
      report.mean_iterations_compare = res.mean_iterations();
      report.max_iterations_compare = max_it;
    }
    if (log)
      *log << "k=" << c.k << " steps=" << res.steps << " mean_iterations=" << res.mean_iterations()
           << " max_iterations=" << max_it << '\n';
  }
  if (!cfg.output_dir.empty())
    write_text(output_path(cfg, "wavefront_profile.csv"), wavefront_csv(report));
  return report;
}

std::string wavefront_csv(const WavefrontReport& report) {
  std::string out = "t,x,dpsi,dpsi_compare\n";
  for (const auto& p : report.profiles)
    for (std::size_t i = 0; i < p.x.size(); ++i)
      out += fmt(p.t) + "," + fmt(p.x[i]) + "," + (i < p.dpsi.size() ? fmt(p.dpsi[i]) : std::string()) + "," +
             (i < p.dpsi_compare.size() ? fmt(p.dpsi_compare[i]) : std::string()) + "\n";
  return out;
}

CustomReport run_custom(const RunConfig& cfg, std::ostream* log) {
  validate_config(cfg);
  CustomReport report;
  report.dt = time_step(cfg, cfg.n);
  const Discretization disc = make_discretization(cfg, cfg.n);
  const ProblemDefinition prob = problem_from_config(cfg);
  Observer obs = [&](const State& s, int) {
    const auto [e0, e1] = energy(disc, s, prob.k, prob.c);
    report.t.push_back(s.t);
    report.e0.push_back(e0);
    report.e1.push_back(e1);
  };
  const RunResult res = run(prob, disc, newmark_config(cfg, report.dt), {obs});
  report.steps = res.steps;
  report.mean_iterations = res.mean_iterations();
  if (log)
    *log << "steps=" << res.steps << " mean_iterations=" << report.mean_iterations << " E0(0)=" << report.e0.front()
         << " E0(T)=" << report.e0.back() << '\n';
  if (!cfg.output_dir.empty()) {
    std::string csv = "t,E0,E1\n";
    for (std::size_t i = 0; i < report.t.size(); ++i)
      csv += fmt(report.t[i]) + "," + fmt(report.e0[i]) + "," + fmt(report.e1[i]) + "\n";
    write_text(output_path(cfg, "energy.csv"), csv);
    const std::string ext = cfg.format == OutputFormat::Csv ? ".csv" : ".vtk";
    export_field(disc, disc.reference().basis, res.state.psi, output_path(cfg, "psi" + ext).string(), cfg.format);
    export_field(disc, disc.reference().basis, res.state.dpsi, output_path(cfg, "dpsi" + ext).string(), cfg.format);
  }
  return report;
}

} // namespace wvhdg
