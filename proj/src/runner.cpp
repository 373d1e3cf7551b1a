#include "splitlv/runner.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>

#include "splitlv/analysis.hpp"
#include "splitlv/csv.hpp"
#include "splitlv/rng.hpp"

namespace splitlv {
namespace {

namespace fs = std::filesystem;

std::string out_file(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void apply_overrides(ExperimentConfig& cfg, const RunOverrides& ov) {
  if (ov.scheme) {
    const auto scheme = parse_scheme(*ov.scheme);
    if (!scheme) {
      throw ConfigError("unknown scheme \"" + *ov.scheme +
                        "\" (expected lie_trotter, strang or euler_maruyama)");
    }
    cfg.schemes = {*scheme};
  }
  if (ov.paths) {
    if (*ov.paths < 1) throw ConfigError("--paths must be >= 1");
    cfg.n_paths = *ov.paths;
  }
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.out_dir) {
    if (ov.out_dir->empty()) throw ConfigError("--out must not be empty");
    cfg.output_dir = *ov.out_dir;
  }
}

int run_simulate(const ExperimentConfig& cfg, int /*workers*/) {
  const double h = cfg.step_size(cfg.step_exponents.front());
  const int level = cfg.step_exponents.front() + 1;
  for (const SchemeId scheme : cfg.schemes) {
    for (int k = 0; k < cfg.n_paths; ++k) {
      const BrownianPath path =
          generate_path(cfg.master_seed, static_cast<std::uint64_t>(k),
                        cfg.horizon, level, cfg.model.m);
      const TrajectoryRecord rec = integrate_trajectory(
          cfg.model, cfg.initial_state, scheme, h, path);

      const std::string name = "simulate_" + std::string(scheme_name(scheme)) +
                               "_path" + std::to_string(k) + ".csv";
      CsvFile csv(out_file(cfg, name));
      std::vector<std::string> header{"t"};
      for (Eigen::Index i = 0; i < cfg.model.d; ++i) {
        header.push_back("x_" + std::to_string(i + 1));
      }
      for (Eigen::Index i = 0; i < cfg.model.d; ++i) {
        header.push_back("y_" + std::to_string(i + 1));
      }
      header.emplace_back("positivity_ok");
      csv.row(header);
      for (std::size_t n = 0; n < rec.states.size(); ++n) {
        std::vector<double> cells{rec.times[n]};
        for (Eigen::Index i = 0; i < cfg.model.d; ++i) {
          cells.push_back(rec.states[n].x[i]);
        }
        for (Eigen::Index i = 0; i < cfg.model.d; ++i) {
          cells.push_back(rec.states[n].y[i]);
        }
        cells.push_back(rec.positivity_ok[n] ? 1.0 : 0.0);
        csv.numeric_row(cells);
      }
      std::cout << "[simulate] scheme=" << scheme_name(scheme) << " path=" << k
                << " h=" << format_double(h) << " rows=" << rec.states.size()
                << (rec.overflow_at ? " overflowed=yes" : "") << " -> " << name
                << "\n";
    }
  }
  return 0;
}

int run_converge(const ExperimentConfig& cfg, int workers) {
  CsvFile summary(out_file(cfg, "converge_summary.csv"));
  summary.row({"scheme", "fitted_slope", "fitted_intercept", "n_paths",
               "excluded_paths", "exclusion_warning"});
  for (const SchemeId scheme : cfg.schemes) {
    const ConvergenceReport report = strong_error_study(
        cfg.model, cfg.initial_state, scheme, cfg.ladder(), cfg.reference_h(),
        cfg.horizon, cfg.n_paths, cfg.master_seed, workers);

    const std::string name =
        "converge_" + std::string(scheme_name(scheme)) + ".csv";
    CsvFile csv(out_file(cfg, name));
    csv.row({"h", "rms_error"});
    for (std::size_t i = 0; i < report.step_sizes.size(); ++i) {
      csv.numeric_row({report.step_sizes[i], report.rms_errors[i]});
    }
    summary.row({std::string(scheme_name(scheme)),
                 format_double(report.fitted_slope),
                 format_double(report.fitted_intercept),
                 std::to_string(report.n_paths),
                 std::to_string(report.excluded_paths),
                 report.exclusion_warning ? "1" : "0"});
    std::cout << "[converge] scheme=" << scheme_name(scheme)
              << " slope=" << format_double(report.fitted_slope)
              << " intercept=" << format_double(report.fitted_intercept)
              << " excluded=" << report.excluded_paths << "/" << report.n_paths
              << " -> " << name << "\n";
  }
  return 0;
}

int run_sympcheck(const ExperimentConfig& cfg, int /*workers*/) {
  CsvFile csv(out_file(cfg, "sympcheck.csv"));
  csv.row({"trial", "scheme", "h", "relative_residual"});
  for (const SchemeId scheme : cfg.schemes) {
    double worst = 0.0;
    int domain_failures = 0;
    for (int t = 0; t < cfg.n_paths; ++t) {
      const SympTrial trial = draw_symp_trial(
          cfg.master_seed, static_cast<std::uint64_t>(t), cfg.model.d,
          cfg.model.m);
      double residual;
      try {
        residual = symplectic_residual(cfg.model, trial.z, trial.h,
                                       trial.noise, scheme)
                       .relative_residual;
      } catch (const DomainError&) {
        // The Euler baseline can step out of the positive orthant, where
        // the conservation law is not even defined; report that as an
        // infinite residual rather than aborting the sweep.
        residual = std::numeric_limits<double>::infinity();
        ++domain_failures;
      }
      worst = std::max(worst, residual);
      csv.row({std::to_string(t), std::string(scheme_name(scheme)),
               format_double(trial.h), format_double(residual)});
    }
    std::cout << "[sympcheck] scheme=" << scheme_name(scheme)
              << " trials=" << cfg.n_paths
              << " max_rel_residual=" << format_double(worst)
              << " left_domain=" << domain_failures << "\n";
  }
  return 0;
}

int run_moments(const ExperimentConfig& cfg, int workers) {
  const double h = cfg.step_size(cfg.step_exponents.back());
  CsvFile summary(out_file(cfg, "moments_summary.csv"));
  summary.row({"scheme", "moment_order", "x_supremum", "y_supremum",
               "n_paths", "sigma2_zero"});
  for (const SchemeId scheme : cfg.schemes) {
    const MomentReport report = moment_supremum(
        cfg.model, cfg.initial_state, scheme, h, cfg.horizon, cfg.n_paths,
        cfg.master_seed, cfg.moment_order, workers);

    const std::string name =
        "moments_" + std::string(scheme_name(scheme)) + ".csv";
    CsvFile csv(out_file(cfg, name));
    csv.row({"t", "x_moment", "y_moment"});
    for (std::size_t n = 0; n < report.times.size(); ++n) {
      csv.numeric_row(
          {report.times[n], report.x_moment[n], report.y_moment[n]});
    }
    summary.row({std::string(scheme_name(scheme)),
                 format_double(report.order),
                 format_double(report.x_supremum),
                 format_double(report.y_supremum),
                 std::to_string(report.n_paths),
                 report.sigma2_zero ? "1" : "0"});
    std::cout << "[moments] scheme=" << scheme_name(scheme)
              << " h=" << format_double(h)
              << " sup_x=" << format_double(report.x_supremum)
              << " sup_y=" << format_double(report.y_supremum) << " -> "
              << name << "\n";
  }
  return 0;
}

int run_phasearea(const ExperimentConfig& cfg, int /*workers*/) {
  if (!cfg.phase_area) {
    throw ConfigError(
        "the phasearea subcommand needs a phase_area block in the config");
  }
  const PhaseAreaConfig& pa = *cfg.phase_area;
  // Fixed column set, so all three schemes run regardless of the
  // config's scheme list.
  const std::vector<SchemeId> schemes{SchemeId::Strang, SchemeId::LieTrotter,
                                      SchemeId::EulerMaruyama};
  const double h = std::ldexp(pa.horizon, -pa.step_exponent);
  const double h_ref = std::ldexp(pa.horizon, -pa.reference_exponent);
  const PhaseAreaSeries series = phase_area_experiment(
      cfg.model, pa.starts, schemes, h, h_ref, pa.horizon, cfg.master_seed);

  CsvFile csv(out_file(cfg, "phasearea.csv"));
  csv.row({"t", "S_strang", "S_lie", "S_em", "S_ref", "err_strang", "err_lie",
           "err_em"});
  for (std::size_t n = 0; n < series.times.size(); ++n) {
    csv.numeric_row({series.times[n], series.areas[0][n], series.areas[1][n],
                     series.areas[2][n], series.reference_areas[n],
                     series.abs_errors[0][n], series.abs_errors[1][n],
                     series.abs_errors[2][n]});
  }

  // Tail-window averages (t in [0.6 T, T]) summarize long-run area drift;
  // NaN when a scheme died earlier.
  std::cout << "[phasearea] nodes=" << series.times.size();
  const char* labels[] = {"strang", "lie", "em"};
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    double sum = 0.0;
    int count = 0;
    bool dead = false;
    for (std::size_t n = 0; n < series.times.size(); ++n) {
      if (series.times[n] < 0.6 * pa.horizon) continue;
      if (std::isnan(series.abs_errors[s][n])) {
        dead = true;
        break;
      }
      sum += series.abs_errors[s][n];
      ++count;
    }
    const double avg =
        dead || count == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : sum / count;
    std::cout << " tail_err_" << labels[s] << "=" << format_double(avg);
  }
  std::cout << " -> phasearea.csv\n";
  return 0;
}

}  // namespace

SympTrial draw_symp_trial(std::uint64_t master_seed, std::uint64_t trial,
                          Eigen::Index d, Eigen::Index m) {
  SympTrial t;
  t.z.x.resize(d);
  t.z.y.resize(d);
  const double lo = std::log(0.1);
  const double hi = std::log(10.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    t.z.x[i] = std::exp(
        lo + (hi - lo) * rng::uniform01(master_seed, trial,
                                        static_cast<std::uint64_t>(i)));
    t.z.y[i] = std::exp(
        lo + (hi - lo) * rng::uniform01(master_seed, trial,
                                        static_cast<std::uint64_t>(d + i)));
  }
  const double u =
      rng::uniform01(master_seed, trial, static_cast<std::uint64_t>(2 * d));
  t.h = std::exp2(-(4.0 + 6.0 * u));
  const double half_sd = std::sqrt(0.5 * t.h);
  t.noise.first_half.resize(m);
  t.noise.second_half.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    t.noise.first_half[j] =
        half_sd * rng::standard_normal(master_seed, trial,
                                       static_cast<std::uint64_t>(j));
    t.noise.second_half[j] =
        half_sd * rng::standard_normal(master_seed, trial,
                                       static_cast<std::uint64_t>(m + j));
  }
  return t;
}

int run_subcommand(const std::string& subcommand,
                   const std::string& config_path,
                   const RunOverrides& overrides) {
  try {
    ExperimentConfig cfg = load_config(config_path);
    apply_overrides(cfg, overrides);
    const int workers = std::max(1, overrides.workers);
    std::filesystem::create_directories(cfg.output_dir);

    if (subcommand == "simulate") return run_simulate(cfg, workers);
    if (subcommand == "converge") return run_converge(cfg, workers);
    if (subcommand == "sympcheck") return run_sympcheck(cfg, workers);
    if (subcommand == "moments") return run_moments(cfg, workers);
    if (subcommand == "phasearea") return run_phasearea(cfg, workers);
    std::cerr << "error: unknown subcommand \"" << subcommand << "\"\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace splitlv
