// slotlab command-line front end: resolves a scenario (file or builtin),
// runs one of the study subcommands, and writes CSV results plus a JSON
// manifest into the output directory. Exit codes: 0 success, 1 numerical
// guard, 2 configuration error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "slotlab/ehrenfest.hpp"
#include "slotlab/errors.hpp"
#include "slotlab/husimi.hpp"
#include "slotlab/io.hpp"
#include "slotlab/liouville.hpp"
#include "slotlab/measurement.hpp"
#include "slotlab/operator_lab.hpp"
#include "slotlab/propagator.hpp"
#include "slotlab/rng.hpp"
#include "slotlab/scenario.hpp"
#include "slotlab/trajectory.hpp"
#include "slotlab/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slotlab;

namespace {

struct Common {
  std::string scenario_path;
  std::string builtin;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

Scenario resolve_scenario(const Common& c, const std::string& fallback = "") {
  if (!c.scenario_path.empty() && !c.builtin.empty())
    throw ConfigError("pass either --scenario or --builtin, not both");
  Scenario sc;
  if (!c.scenario_path.empty())
    sc = load_scenario(c.scenario_path);
  else if (!c.builtin.empty())
    sc = builtin_scenario(c.builtin);
  else if (!fallback.empty())
    sc = builtin_scenario(fallback);
  else
    throw ConfigError("missing scenario: pass --scenario <file> or "
                      "--builtin <name>");
  if (c.seed_given) sc.seed = c.seed;
  return sc;
}

fs::path prepare_out(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw ConfigError("cannot create output directory: " + c.out);
  return dir;
}

void write_manifest_file(const fs::path& dir, const Scenario& sc,
                         const std::string& command, const json& extra) {
  json m = make_manifest(sc, command, extra);
  write_text_file((dir / (command + "_manifest.json")).string(),
                  dump_json_17(m, 1));
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Square partition with slot side ratio*sigma on both axes (sigma_p
// conjugate to sigma_x), slot (0,0) centered at the origin, delta_p snapped
// to divide the momentum band so full-band stripe sums tile exactly.
SlotPartition study_partition(double ratio, double sigma_x, const Grid& g) {
  double sp = kHbar / (2.0 * sigma_x);
  SlotPartition part{ratio * sigma_x, ratio * sp, 0.0, 0.0};
  part.x_origin = -part.delta_x / 2;
  part.p_origin = -part.delta_p / 2;
  double band = 2.0 * g.p_nyquist();
  double tiles = std::max(1.0, std::round(band / part.delta_p));
  part.delta_p = band / tiles;
  return part;
}

// Grid whose length is an odd number of x-slots with at least 7 sigma of
// margin on each side of the central slot.
Grid study_grid(double ratio, double sigma_x, int n) {
  double dslot = ratio * sigma_x;
  int tiles = int(std::ceil((dslot + 14.0 * sigma_x) / dslot));
  if (tiles % 2 == 0) ++tiles;
  double half = tiles * dslot / 2;
  return Grid(-half, half, n);
}

int cmd_povm_check(const Common& c) {
  fs::path dir = prepare_out(c);
  Scenario sc = resolve_scenario(c, "harmonic");
  double sigma = sc.initial.sigma_x;
  json extra;
  std::vector<std::vector<double>> rows;

  for (double ratio : {4.0, 8.0, 16.0}) {
    Grid g = study_grid(ratio, sigma, 256);
    SlotPartition part = study_partition(ratio, sigma, g);
    OperatorMatrix p00 = build_povm_element({0, 0}, part, sigma, g);
    double closed = projectivity_error_closed_form(part, sigma);
    double numeric = projectivity_error_numeric(p00);

    // completeness over one full period of slots
    int tiles = int(std::round(g.length() / part.delta_x));
    int i_lo = (1 - tiles) / 2;
    StripeWindow win = full_band_stripe_window(part, g, i_lo, i_lo + tiles - 1);
    StripeSet stripes = build_stripe_projectors(part, sigma, g, win);
    Eigen::MatrixXcd total =
        Eigen::MatrixXcd::Zero(g.n, g.n);
    for (const auto& s : stripes.x_stripe) total += s.m;
    double comp = (total.diagonal().real().array() - 1.0).abs().maxCoeff();

    rows.push_back({ratio, numeric, closed, numeric / closed, comp});
    std::cout << "ratio " << g6(ratio) << ": eps_numeric=" << g6(numeric)
              << " eps_closed=" << g6(closed)
              << " ratio=" << g6(numeric / closed)
              << " completeness_dev=" << g6(comp) << "\n";

    if (ratio == 16.0) {
      CommutatorReport cr = commutator_check({0, 0}, part, sigma, g, stripes);
      extra["commutators"] = {
          {"residual_p", cr.residual_p},
          {"residual_x", cr.residual_x},
          {"generator_residual_p", cr.generator_residual_p},
          {"generator_residual_x", cr.generator_residual_x},
          {"element_identity_p", cr.element_identity_p},
          {"element_identity_x", cr.element_identity_x},
          {"stripe_identity_p", cr.stripe_identity_p},
          {"stripe_identity_x", cr.stripe_identity_x},
          {"translation_covariance_x", cr.translation_covariance_x},
          {"translation_covariance_p", cr.translation_covariance_p}};
      std::cout << "stripe identity residuals: p=" << g6(cr.stripe_identity_p)
                << " x=" << g6(cr.stripe_identity_x)
                << " (element form: p=" << g6(cr.element_identity_p)
                << " x=" << g6(cr.element_identity_x) << ")\n";
    }
    if (ratio == 8.0) {
      DerivativeErrorReport dr =
          discrete_derivative_error({0, 0}, part, sigma, g);
      extra["derivative_error"] = {{"eps_d", dr.eps_d},
                                   {"predicted", dr.predicted},
                                   {"h", dr.h},
                                   {"eps_d_half_h", dr.eps_d_half_h}};
      std::cout << "eps_D(8 sigma)=" << g6(dr.eps_d)
                << " second-order estimate=" << g6(dr.predicted) << "\n";
    }
  }
  write_text_file(
      (dir / "povm_check.csv").string(),
      time_series_csv({"ratio", "eps_numeric", "eps_closed", "eps_ratio",
                       "completeness_dev"},
                      rows));
  write_manifest_file(dir, sc, "povm-check", extra);
  return 0;
}

// Quantum slot distribution and the semi-Lagrangian transport of the
// initial Husimi, evaluated at each scheduled output time.
struct CompareSeries {
  std::vector<double> times;
  std::vector<SlotDistribution> quantum;
  std::vector<ClassicalField> classical;
  std::vector<double> tv;
  std::vector<double> escaped;
};

CompareSeries run_compare(const Scenario& sc) {
  if (sc.schedule.output_times.empty())
    throw ConfigError("missing field: schedule.output_times");
  Grid grid = sc.make_grid();
  WaveFunction psi0 = sc.make_initial(grid);
  double sigma = sc.initial.sigma_x;
  SlotWindow window = grid_slot_window(grid, sc.partition);
  QuadratureRule rule = quadrature_for(sc.partition, sigma);
  auto q0 = [&psi0, sigma](double x, double p) {
    return husimi_point(psi0, sigma, x, p);
  };
  double horizon = sc.schedule.output_times.back();
  FlowOptions flow;
  flow.dt = std::max(horizon / 2000.0, 1e-4);
  flow.box_x = std::max(1e3, 20.0 * sc.grid_half);
  flow.box_p = std::max(1e3, 20.0 * grid.p_nyquist());
  PropagatorConfig cfg = sc.prop;
  if (cfg.dt <= 0) cfg.dt = auto_dt(sc.hamiltonian, grid);

  CompareSeries out;
  WaveFunction psi = psi0;
  double prev = 0.0;
  for (double t : sc.schedule.output_times) {
    psi = evolve(psi, sc.hamiltonian, cfg, t - prev);
    prev = t;
    SlotDistribution q = slot_probabilities(psi, sc.partition, sigma, window);
    SemiLagrangianResult cl = semi_lagrangian_evolve(
        q0, sc.hamiltonian, sc.partition, window, t, rule, flow);
    out.times.push_back(t);
    out.tv.push_back(total_variation(q, cl.field));
    out.escaped.push_back(cl.escaped_weight);
    out.quantum.push_back(std::move(q));
    out.classical.push_back(std::move(cl.field));
  }
  return out;
}

int cmd_evolve(const Common& c) {
  fs::path dir = prepare_out(c);
  Scenario sc = resolve_scenario(c);
  CompareSeries series = run_compare(sc);
  json extra;
  extra["times"] = series.times;
  extra["tv"] = series.tv;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    std::string qname = "quantum_" + std::to_string(k) + ".csv";
    std::string cname = "classical_" + std::to_string(k) + ".csv";
    write_text_file((dir / qname).string(),
                    distribution_csv(series.quantum[k], sc.partition));
    write_text_file(
        (dir / cname).string(),
        distribution_csv(series.classical[k].to_distribution(), sc.partition));
    std::cout << "t=" << g6(series.times[k]) << " TV=" << g6(series.tv[k])
              << " -> " << qname << ", " << cname << "\n";
  }
  write_manifest_file(dir, sc, "evolve", extra);
  return 0;
}

int cmd_compare(const Common& c, double threshold) {
  fs::path dir = prepare_out(c);
  Scenario sc = resolve_scenario(c);
  CompareSeries series = run_compare(sc);

  double crossing = -1.0;
  for (std::size_t k = 0; k < series.times.size(); ++k)
    if (series.tv[k] >= threshold) {
      crossing = series.times[k];
      break;
    }
  // closed-form lower bound, minimized over the slot centers in the window
  Grid grid = sc.make_grid();
  SlotWindow win = grid_slot_window(grid, sc.partition);
  double bound = 0.0;
  bool first = true;
  for (int i = win.i_lo; i <= win.i_hi; ++i) {
    double xc = sc.partition.x_lo(i) + sc.partition.delta_x / 2;
    double b =
        ehrenfest_lower_bound(sc.hamiltonian, sc.partition, xc).t_lower_bound;
    if (first || b < bound) bound = b;
    first = false;
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    rows.push_back({series.times[k], series.tv[k], series.escaped[k]});
    std::cout << "t=" << g6(series.times[k]) << " TV=" << g6(series.tv[k])
              << "\n";
  }
  write_text_file((dir / "compare.csv").string(),
                  time_series_csv({"t", "tv", "escaped_weight"}, rows));
  json extra;
  extra["threshold"] = threshold;
  extra["first_crossing"] = crossing;  // -1 when never crossed
  extra["ehrenfest_bound_min"] = bound;
  write_manifest_file(dir, sc, "compare", extra);
  if (crossing >= 0)
    std::cout << "first TV>=" << g6(threshold) << " crossing at t="
              << g6(crossing) << " (closed-form lower bound " << g6(bound)
              << ")\n";
  else
    std::cout << "TV stayed below " << g6(threshold)
              << " over the schedule (closed-form lower bound " << g6(bound)
              << ")\n";
  return 0;
}

int cmd_ehrenfest(const Common& c) {
  fs::path dir = prepare_out(c);
  Scenario sc = resolve_scenario(c, "micro");
  std::vector<ScenarioRow> table = scenario_table();
  json jt = json::array();
  for (const auto& r : table) {
    jt.push_back({{"label", r.label},
                  {"mass_kg", r.mass_si},
                  {"delta_x_m", r.delta_x_si},
                  {"delta_p_kg_m_s", r.delta_p_si},
                  {"t_e_seconds", r.t_e_seconds},
                  {"t_e_seconds_direct", r.t_e_seconds_direct},
                  {"interval_seconds", r.interval_seconds},
                  {"classical_verdict", r.classical_verdict}});
  }
  json extra;
  extra["table"] = jt;

  for (const auto& r : table) {
    if (r.label == sc.name) {
      std::cout << "t_E = " << g6(r.t_e_seconds) << " s\n";
      if (r.interval_seconds > 0)
        std::cout << "collision interval = " << g6(r.interval_seconds)
                  << " s; classical verdict: "
                  << (r.classical_verdict ? "interval < t_E"
                                          : "interval >= t_E")
                  << "\n";
    }
  }
  // closed-form bound for the scenario's own dynamics, in simulation units
  EhrenfestReport rep = ehrenfest_lower_bound(
      sc.hamiltonian, sc.partition, sc.initial.x0, sc.name);
  extra["bound_sim_units"] = {{"t_lower_bound", rep.t_lower_bound},
                              {"kinetic_term", rep.kinetic_term},
                              {"potential_term", rep.potential_term}};
  std::cout << "scenario bound (sim units): t_E >= " << g6(rep.t_lower_bound)
            << "\n";
  for (const auto& r : table)
    std::cout << "  " << r.label << ": t_E = " << g6(r.t_e_seconds) << " s"
              << (r.interval_seconds > 0
                      ? std::string(", interval = ") + g6(r.interval_seconds) +
                            " s"
                      : std::string())
              << "\n";
  write_manifest_file(dir, sc, "ehrenfest", extra);
  return 0;
}

struct RunStats {
  std::vector<TrajectoryRecord> records;
  std::vector<AgreementReport> agreement;
  int truncated = 0;
  double mean_fraction = 0.0;
  double mean_distance = 0.0;
};

RunStats run_batch(const Scenario& sc, int runs,
                   const std::vector<double>& taus, double tau_tag) {
  Grid grid = sc.make_grid();
  WaveFunction psi0 = sc.make_initial(grid);
  double sigma = sc.initial.sigma_x;
  int n = int(taus.size());
  RunStats st;
  st.records.resize(std::size_t(runs));
  st.agreement.resize(std::size_t(runs));

  TrajectoryOptions opt;
  opt.prop = sc.prop;
  // ensemble runs tolerate coarser per-slot quadrature; the sampling
  // decisions only need slot probabilities to ~1e-4
  opt.measurement.node_scale = 0.5;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int r = 0; r < runs; ++r) {
    std::uint64_t rs = derive_seed(sc.seed, std::uint64_t(r));
    TrajectoryRecord rec =
        tau_tag > 0
            ? repeated_measurement_run(psi0, sc.hamiltonian, sc.partition,
                                       sigma, tau_tag, n, rs, opt)
            : repeated_measurement_run(psi0, sc.hamiltonian, sc.partition,
                                       sigma, taus, rs, opt);
    AgreementReport ag;
    if (!rec.truncated && !rec.outcomes.empty() && tau_tag > 0) {
      DiscreteTrajectory pred = classical_prediction(
          rec.outcomes.front(), sc.hamiltonian, sc.partition, tau_tag, n);
      if (!pred.truncated)
        ag = trajectory_agreement(rec.outcomes, pred.slots);
    }
    st.records[std::size_t(r)] = std::move(rec);
    st.agreement[std::size_t(r)] = ag;
  }
  int scored = 0;
  for (int r = 0; r < runs; ++r) {
    if (st.records[std::size_t(r)].truncated) {
      ++st.truncated;
      continue;
    }
    st.mean_fraction += st.agreement[std::size_t(r)].fraction;
    st.mean_distance += st.agreement[std::size_t(r)].mean_index_distance;
    ++scored;
  }
  if (scored > 0) {
    st.mean_fraction /= scored;
    st.mean_distance /= scored;
  }
  return st;
}

int cmd_trajectory(const Common& c, int runs, int cycles_override,
                   double tau_override) {
  fs::path dir = prepare_out(c);
  Scenario sc = resolve_scenario(c);
  if (cycles_override > 0) sc.schedule.cycles = cycles_override;
  if (tau_override > 0) sc.schedule.tau = tau_override;
  std::vector<double> taus = sc.intervals();
  if (taus.empty())
    throw ConfigError("missing field: schedule (tau and cycles, or taus)");
  double tau_tag = sc.schedule.taus.empty() ? sc.schedule.tau : 0.0;

  RunStats st = run_batch(sc, runs, taus, tau_tag);

  std::vector<std::vector<double>> rows;
  for (int r = 0; r < runs; ++r) {
    const auto& rec = st.records[std::size_t(r)];
    const auto& ag = st.agreement[std::size_t(r)];
    SlotKey start = rec.outcomes.empty() ? SlotKey{0, 0} : rec.outcomes.front();
    rows.push_back({double(r), double(rec.seed), double(start.i),
                    double(start.j), ag.fraction, ag.mean_index_distance,
                    rec.truncated ? 1.0 : 0.0, rec.final_state_norm});
  }
  write_text_file(
      (dir / "trajectory.csv").string(),
      time_series_csv({"run", "seed", "start_i", "start_j", "fraction",
                       "mean_index_distance", "truncated", "final_norm"},
                      rows));
  json extra;
  extra["runs"] = runs;
  extra["cycles"] = int(taus.size());
  extra["tau"] = tau_tag;
  extra["mean_fraction"] = st.mean_fraction;
  extra["mean_index_distance"] = st.mean_distance;
  extra["truncated_runs"] = st.truncated;
  write_manifest_file(dir, sc, "trajectory", extra);
  std::cout << "mean exact-slot agreement = " << g6(st.mean_fraction) << " ("
            << runs << " runs, " << st.truncated << " truncated)\n";
  return 0;
}

int cmd_sweep(const Common& c, int runs) {
  fs::path dir = prepare_out(c);
  Scenario sc = resolve_scenario(c, "harmonic");
  double sigma = sc.initial.sigma_x;

  // projectivity defect across slot sizes
  std::vector<std::vector<double>> eps_rows;
  for (double ratio : {4.0, 8.0, 16.0, 32.0}) {
    Grid g = study_grid(ratio, sigma, 256);
    SlotPartition part = study_partition(ratio, sigma, g);
    double closed = projectivity_error_closed_form(part, sigma);
    double asym = projectivity_error_asymptote(part, sigma);
    double numeric = std::numeric_limits<double>::quiet_NaN();
    if (ratio <= 16.0)
      numeric = projectivity_error_numeric(
          build_povm_element({0, 0}, part, sigma, g));
    eps_rows.push_back({ratio, closed, asym, numeric});
    std::cout << "ratio " << g6(ratio) << ": eps_closed=" << g6(closed)
              << " asymptote=" << g6(asym) << "\n";
  }
  write_text_file((dir / "sweep_eps.csv").string(),
                  time_series_csv(
                      {"ratio", "eps_closed", "eps_asymptote", "eps_numeric"},
                      eps_rows));

  // agreement across measurement intervals, total time held at one cycle
  // count x tau from the scenario schedule
  double total = sc.schedule.tau * sc.schedule.cycles;
  if (!(total > 0))
    throw ConfigError("sweep needs a schedule with tau and cycles");
  std::vector<std::vector<double>> tau_rows;
  for (int div : {8, 16, 32, 64, 128}) {
    double tau = total / div;
    std::vector<double> taus(std::size_t(div), tau);
    RunStats st = run_batch(sc, runs, taus, tau);
    tau_rows.push_back({tau, double(div), st.mean_fraction, double(runs)});
    std::cout << "tau=total/" << div << "=" << g6(tau)
              << " mean agreement=" << g6(st.mean_fraction) << "\n";
  }
  write_text_file(
      (dir / "sweep_tau.csv").string(),
      time_series_csv({"tau", "cycles", "mean_agreement", "runs"}, tau_rows));
  json extra;
  extra["runs"] = runs;
  write_manifest_file(dir, sc, "sweep", extra);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"slotlab: coarse phase-space measurements on 1D quantum "
               "systems"};
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  auto* opt_scenario =
      app.add_option("--scenario", c.scenario_path, "scenario JSON file")
          ->envname("SLOTLAB_SCENARIO");
  opt_scenario->check(CLI::ExistingFile);
  app.add_option("--builtin", c.builtin,
                 "builtin preset: micro, macro, cloud-chamber, harmonic, "
                 "quartic")
      ->envname("SLOTLAB_BUILTIN");
  auto* opt_seed = app.add_option("--seed", c.seed, "master seed override")
                       ->envname("SLOTLAB_SEED");
  app.add_option("--out", c.out, "output directory")->envname("SLOTLAB_OUT");
  app.add_option("--threads", c.threads, "worker threads (0 = default)")
      ->envname("SLOTLAB_THREADS");

  auto* povm = app.add_subcommand("povm-check",
                                  "projectivity, completeness, commutator "
                                  "and derivative diagnostics");
  auto* ev = app.add_subcommand(
      "evolve", "quantum and classical slot distributions at output times");
  auto* cmp = app.add_subcommand(
      "compare", "TV time series quantum vs Liouville, first crossing");
  double threshold = 0.3;
  cmp->add_option("--threshold", threshold, "TV crossing threshold");
  auto* ehr = app.add_subcommand("ehrenfest",
                                 "closed-form bounds and the physical "
                                 "scenario table");
  auto* traj = app.add_subcommand(
      "trajectory", "repeated-measurement runs and classical agreement");
  int runs = 100, cycles_override = 0;
  double tau_override = 0.0;
  traj->add_option("--runs", runs, "number of seeded runs");
  traj->add_option("--cycles", cycles_override, "override schedule cycles");
  traj->add_option("--tau", tau_override, "override measurement interval");
  auto* swp = app.add_subcommand("sweep",
                                 "slot-size and interval parameter sweeps");
  int sweep_runs = 24;
  swp->add_option("--runs", sweep_runs, "runs per interval");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  c.seed_given = opt_seed->count() > 0;
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

  if (povm->parsed()) return cmd_povm_check(c);
  if (ev->parsed()) return cmd_evolve(c);
  if (cmp->parsed()) return cmd_compare(c, threshold);
  if (ehr->parsed()) return cmd_ehrenfest(c);
  if (traj->parsed()) return cmd_trajectory(c, runs, cycles_override,
                                            tau_override);
  if (swp->parsed()) return cmd_sweep(c, sweep_runs);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what()
              << "\nhint: refine the grid, reduce the step, or enlarge the "
                 "window.\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
