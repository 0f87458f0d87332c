#include "wvhdg/errors.hpp"
#include "wvhdg/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

struct Overrides {
  std::string config;
  std::optional<int> p;
  std::string levels;
  std::string out;
  bool print_config = false;
};

wvhdg::RunConfig resolve(const Overrides& o, wvhdg::ProblemKind kind, bool kind_from_file) {
  wvhdg::RunConfig cfg = o.config.empty() ? wvhdg::default_config(kind) : wvhdg::load_config(o.config);
  if (!kind_from_file && cfg.problem != kind)
    throw wvhdg::ConfigError("config file selects problem '" + wvhdg::to_string(cfg.problem) +
                             "' but the subcommand runs '" + wvhdg::to_string(kind) + "'");
  if (o.p)
    cfg.p = *o.p;
  if (!o.levels.empty())
    cfg.levels = wvhdg::parse_int_list(o.levels);
  if (!o.out.empty())
    cfg.output_dir = o.out;
  wvhdg::validate_config(cfg);
  return cfg;
}

std::string rate(const std::optional<double>& r) {
  if (!r)
    return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *r);
  return buf;
}

int run_experiment(const wvhdg::RunConfig& cfg) {
  using wvhdg::ProblemKind;
  switch (cfg.problem) {
  case ProblemKind::HConvergence: {
    const auto report = wvhdg::run_h_convergence(cfg, &std::cerr);
    const auto rp = report.rates_psi(), rv = report.rates_v(), rs = report.rates_psistar();
    bool failed = false;
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const auto& l = report.levels[i];
      if (!l.failure.empty()) {
        failed = true;
        std::printf("n=%-4d failed: %s\n", l.n, l.failure.c_str());
        continue;
      }
      std::printf("n=%-4d h=%.4e err_psi=%.4e (%s) err_v=%.4e (%s) err_psistar=%.4e (%s)\n", l.n, l.h, l.err_psi,
                  rate(rp[i]).c_str(), l.err_v, rate(rv[i]).c_str(), *l.err_psistar, rate(rs[i]).c_str());
    }
    return failed ? kSolverError : kOk;
  }
  case ProblemKind::DeltaConvergence: {
    const auto report = wvhdg::run_delta_convergence(cfg, &std::cerr);
    for (const auto& l : report.levels)
      std::printf("delta=%.1e err_psi=%.4e err_v=%.4e\n", l.delta, l.err_psi, l.err_v);
    std::printf("slope_psi=%s slope_v=%s\n", rate(report.slope_psi).c_str(), rate(report.slope_v).c_str());
    return kOk;
  }
  case ProblemKind::Wavefront: {
    const auto report = wvhdg::run_wavefront(cfg, &std::cerr);
    std::printf("steps=%d mean_iterations=%.2f (k=%g) %.2f (k=%g)\n", report.steps, report.mean_iterations,
                report.k, report.mean_iterations_compare, report.compare_k);
    return kOk;
  }
  case ProblemKind::Custom: {
    const auto report = wvhdg::run_custom(cfg, &std::cerr);
    std::printf("steps=%d E0(0)=%.10e E0(T)=%.10e\n", report.steps, report.e0.front(), report.e0.back());
    return kOk;
  }
  }
  return kConfigError;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDG solver for the Westervelt equation"};
  app.require_subcommand(1);

  Overrides o;
  struct Sub {
    const char* name;
    const char* help;
    wvhdg::ProblemKind kind;
    bool kind_from_file;
  };
  const Sub subs[] = {
      {"h-convergence", "Manufactured-solution mesh refinement study", wvhdg::ProblemKind::HConvergence, false},
      {"delta-convergence", "Vanishing sound diffusivity study", wvhdg::ProblemKind::DeltaConvergence, false},
      {"wavefront", "Forced wavefront, nonlinear vs linear comparison", wvhdg::ProblemKind::Wavefront, false},
      {"run", "Single run described by a config file", wvhdg::ProblemKind::Custom, true},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> commands;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("--config", o.config, "Config file (key = value with [sections])");
    cmd->add_option("--p", o.p, "Polynomial degree");
    cmd->add_option("--levels", o.levels, "Mesh levels, e.g. 4,8,16,32");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_flag("--print-config", o.print_config, "Print the resolved config and exit");
    commands.emplace_back(cmd, &s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (const auto& [cmd, sub] : commands) {
      if (!cmd->parsed())
        continue;
      const wvhdg::RunConfig cfg = resolve(o, sub->kind, sub->kind_from_file);
      if (o.print_config) {
        std::cout << wvhdg::serialize_config(cfg);
        return kOk;
      }
      return run_experiment(cfg);
    }
  } catch (const wvhdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const wvhdg::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const wvhdg::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const wvhdg::Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverError;
  }
  return kConfigError;
}
