#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "CLI11.hpp"

namespace rushlarsen::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

class CsvFile {
 public:
  CsvFile(const fs::path& path, const RunConfig& config, const std::string& command) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write '" + path.string() + "'");
    out_ << "# rushlarsen " << command << " config-sha256=" << config.digest << '\n';
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("write to '" + path_.string() + "' failed");
  }

  std::ofstream& stream() { return out_; }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  fs::path path_;
  std::ofstream out_;
};

void prepare_out(const fs::path& out, const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());
  std::ofstream cfg(out / "config.json");
  if (!cfg) throw IoError("cannot write '" + (out / "config.json").string() + "'");
  cfg << config.document.dump(2) << '\n';
  if (!cfg) throw IoError("write to config.json failed");
}

const SchemeSpec& single_scheme(const RunConfig& config) {
  if (config.schemes.size() != 1) throw ConfigError("schemes", "this command takes a single scheme");
  return config.schemes.front();
}

void require_multistep(const SchemeSpec& s, const std::string& path) {
  if (s.family == Family::RungeKutta4) throw ConfigError(path, "RK4 has no multistep stability domain");
}

}  // namespace

int cmd_solve(const RunConfig& config, const fs::path& out, std::ostream& log) {
  const SchemeSpec& scheme = single_scheme(config);
  const SplitProblem problem = make_problem(config.problem);
  const double horizon = problem.horizon;
  if (!(horizon >= scheme.steps() * config.h)) {
    throw ConfigError("run.h", "horizon " + format_number(horizon) + " is shorter than " +
                                   std::to_string(scheme.steps()) + " steps");
  }
  prepare_out(out, config);

  const Trajectory traj = integrate(problem, scheme, config.h, horizon, config.integrate);

  CsvFile csv(out / "trajectory.csv", config, "solve");
  auto& s = csv.stream();
  s << 't';
  for (std::size_t i = 1; i <= problem.dimension(); ++i) s << ",y_" << i;
  s << '\n';
  for (std::size_t n = 0; n < traj.size(); ++n) {
    s << format_number(traj.t[n]);
    for (double v : traj.y[n]) s << ',' << format_number(v);
    s << '\n';
  }
  csv.close();

  log << scheme.name() << " on " << problem.name << ": " << traj.size() << " nodes, " << traj.evaluations
      << " evaluations";
  if (traj.overflowed()) {
    log << ", overflow at t = " << format_number(traj.t.empty() ? 0.0 : traj.t.back()) << '\n';
    return kExitOverflow;
  }
  log << '\n';
  return kExitOk;
}

int cmd_stability(const RunConfig& config, const fs::path& out, std::ostream& log) {
  for (std::size_t i = 0; i < config.schemes.size(); ++i) {
    require_multistep(config.schemes[i], config.schemes.size() == 1 ? "scheme" : "schemes[" + std::to_string(i) + "]");
  }
  prepare_out(out, config);

  CsvFile crossings(out / "crossings.csv", config, "stability");
  crossings.row("scheme", "k", "theta", "crossing");
  for (const SchemeSpec& scheme : config.schemes) {
    const Rect rect = config.rect.value_or(default_rect(scheme.order));
    const std::vector<double> thetas = config.thetas.empty() ? default_thetas(scheme.order) : config.thetas;
    for (double theta : thetas) {
      const StabilityGrid grid = scan(scheme, theta, rect, config.n_re, config.n_im, config.workers);
      char theta_tag[32];
      std::snprintf(theta_tag, sizeof theta_tag, "%.6g", theta);
      const fs::path path = out / ("grid_" + scheme.name() + "_theta_" + theta_tag + ".csv");
      CsvFile csv(path, config, "stability");
      csv.row("re", "im", "rho", "stable");
      for (std::size_t j = 0; j < grid.n_im; ++j) {
        for (std::size_t i = 0; i < grid.n_re; ++i) {
          csv.row(grid.re(i), grid.im(j), grid.rho[grid.index(i, j)], grid.stable(i, j) ? 1 : 0);
        }
      }
      csv.close();

      const CrossingResult c = real_axis_crossing(scheme, theta, config.search_limit);
      std::string value;
      switch (c.kind) {
        case CrossingKind::Crossing: value = format_number(c.x); break;
        case CrossingKind::NoCrossing: value = "none"; break;
        case CrossingKind::Degenerate: value = "degenerate"; break;
      }
      crossings.row(scheme.family_name(), scheme.order, theta, value);
      log << scheme.name() << " theta=" << theta_tag << " crossing " << value << '\n';
    }
  }
  crossings.close();
  return kExitOk;
}

int cmd_converge(const RunConfig& config, const fs::path& out, std::ostream& log) {
  const SplitProblem problem = make_problem(config.problem);
  const double h_ref = config.h_ref.value_or(config.h);
  if (config.component && *config.component >= problem.dimension()) {
    throw ConfigError("converge.component", "out of range for a problem of dimension " +
                                                std::to_string(problem.dimension()));
  }
  int m_max = 0;
  for (int m : config.m_list) m_max = std::max(m_max, m);
  for (const SchemeSpec& s : config.schemes) {
    if (std::ldexp(h_ref, m_max) * s.steps() > problem.horizon) {
      throw ConfigError("converge.m_list", "coarsest step exceeds the horizon for " + s.name());
    }
  }
  prepare_out(out, config);

  ConvergenceOptions opts;
  opts.component = config.component;
  opts.prefer_exact = config.prefer_exact;
  opts.workers = config.workers;
  opts.integrate = config.integrate;

  CsvFile csv(out / "convergence.csv", config, "converge");
  csv.row("scheme", "k", "h", "error", "observed_order");
  CsvFile ref(out / "reference.csv", config, "converge");
  ref.row("scheme", "k", "h_ref", "exact", "disagreement", "verified");
  for (const SchemeSpec& scheme : config.schemes) {
    ConvergenceReport report = [&] {
      try {
        return convergence_study(problem, scheme, h_ref, config.m_list, opts);
      } catch (const std::runtime_error& e) {
        throw ConfigError("converge.h_ref", e.what());
      }
    }();
    for (const auto& row : report.rows) {
      csv.row(scheme.family_name(), scheme.order, row.h, row.error ? format_number(*row.error) : "unstable",
              row.observed_order ? format_number(*row.observed_order) : "");
    }
    ref.row(scheme.family_name(), scheme.order, report.h_ref, report.exact_reference ? 1 : 0,
            report.reference_disagreement ? format_number(*report.reference_disagreement) : "",
            report.reference_verified ? 1 : 0);
    log << scheme.name() << ": " << report.rows.size() << " rows";
    if (!report.reference_verified) log << " (reference not verified at h_ref = " << format_number(h_ref) << ")";
    log << '\n';
  }
  csv.close();
  ref.close();
  return kExitOk;
}

int cmd_critical_dt(const RunConfig& config, const fs::path& out, std::ostream& log) {
  const SplitProblem problem = make_problem(config.problem);
  prepare_out(out, config);

  CriticalDtOptions opts;
  opts.tol = config.tol;
  opts.cap = config.cap;
  opts.scan_from = config.scan_from;
  opts.growth = config.growth;
  opts.integrate = config.integrate;

  CsvFile csv(out / "critical_dt.csv", config, "critical-dt");
  csv.row("scheme", "k", "problem", "dt0", "bracket_lo", "bracket_hi");
  for (const SchemeSpec& scheme : config.schemes) {
    const CriticalDtReport r = critical_dt(problem, scheme, config.h_hi, opts);
    const bool bracketed = r.kind == CriticalDtKind::Bracketed;
    csv.row(scheme.family_name(), scheme.order, problem.name, r.dt0, r.stable_h,
            bracketed ? format_number(r.overflow_h) : "inf");
    log << scheme.name() << ": dt0 = " << format_number(r.dt0)
        << (bracketed ? "" : " (no overflow up to the cap)") << '\n';
  }
  csv.close();
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"Rush-Larsen and exponential Adams multistep solvers for stiff split ODEs", "rushlarsen"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--set", overrides, "Override a config key, e.g. --set run.h=0.05");
  app.add_option("--out", out_dir, "Output directory");

  using Command = int (*)(const RunConfig&, const fs::path&, std::ostream&);
  Command command = nullptr;
  auto sub = [&](const char* name, const char* help, Command fn) {
    app.add_subcommand(name, help)->fallthrough()->callback([&command, fn] { command = fn; });
  };
  sub("solve", "Integrate one problem and write the trajectory", cmd_solve);
  sub("stability", "Scan stability domains and real-axis crossings", cmd_stability);
  sub("converge", "Error e(h) against a reference for h = 2^m h_ref", cmd_converge);
  sub("critical-dt", "Largest step that runs without overflow", cmd_critical_dt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::optional<fs::path> file;
    if (!config_path.empty()) file = config_path;
    const RunConfig config = load_config(file, overrides);
    return command(config, out_dir, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace rushlarsen::cli
