#include "subrad/cli.hpp"

#include <random>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "subrad/analysis.hpp"
#include "subrad/dynamics.hpp"
#include "subrad/farfield.hpp"
#include "subrad/version.hpp"

namespace subrad {

namespace {

AtomArray resolve_structure(json& config) {
  if (config.contains("structure")) {
    if (config["structure"].is_string()) {
      // inline the referenced file so the manifest is self-contained
      config["structure"] =
          load_json_file(config["structure"].get<std::string>());
    }
    AtomArray a = atom_array_from_json(config["structure"]);
    if (config.contains("scale_to_min_distance")) {
      a = scaled_to_min_distance(a,
                                 config["scale_to_min_distance"].get<Real>());
      config["structure"] = to_json(a);
      config.erase("scale_to_min_distance");
    }
    return a;
  }
  if (!config.contains("geometry"))
    throw ConfigError("config needs \"geometry\" or \"structure\"");
  AtomArray a = make_geometry(geometry_spec_from_json(config["geometry"]));
  if (config.contains("scale_to_min_distance"))
    a = scaled_to_min_distance(a,
                               config["scale_to_min_distance"].get<Real>());
  return a;
}

VecX resolve_times(const json& config) {
  Real t_end = 30.0;
  int n = 3001;
  if (config.contains("times")) {
    t_end = config["times"].value("t_end", t_end);
    n = config["times"].value("n", n);
  }
  return uniform_times(t_end, n);
}

SurrogateParams resolve_surrogate(const json& config) {
  SurrogateParams p;
  if (config.contains("surrogate")) {
    p.alpha = config["surrogate"].value("alpha", p.alpha);
    p.beta = config["surrogate"].value("beta", p.beta);
  }
  return p;
}

std::vector<std::string> mode_row(const SpectralData& s, const ModeWeights& w,
                                  int l) {
  return {format_real(s.eigenvalues(l).real()),
          format_real(s.eigenvalues(l).imag()),
          format_real(s.decay_rates(l)),
          format_real(std::abs(w.weights(l))),
          format_real(std::norm(w.weights(l))),
          format_real(std::arg(w.weights(l))),
          format_real(w.normalized_magnitudes(l))};
}

void cmd_spectrum(json& config, OutputWriter& out) {
  const AtomArray array = resolve_structure(config);
  const EffectiveHamiltonian ham = build_hamiltonian(array);
  const SpectralData s = decompose(ham);
  const ModeWeights w = mode_weights(s, storage_state(array));
  const ModeResiduals res = residuals(ham, s);

  std::vector<std::vector<std::string>> rows;
  for (int l = 0; l < s.n_modes(); ++l) rows.push_back(mode_row(s, w, l));
  out.write_csv("modes.csv", "re_kappa,im_kappa,gamma_over_gamma0,w_abs,w_abs2,w_arg,p", rows);

  rows.clear();
  for (int l = 0; l < s.n_modes(); ++l) {
    rows.push_back({std::to_string(l), format_real(res.right(l)),
                    format_real(res.left(l))});
  }
  out.write_csv("residuals.csv", "mode,right_residual,left_residual", rows);
}

void cmd_dynamics(json& config, OutputWriter& out) {
  const AtomArray array = resolve_structure(config);
  const VecX times = resolve_times(config);
  const EffectiveHamiltonian ham = build_hamiltonian(array);
  const SpectralData s = decompose(ham);
  const ModeWeights w = mode_weights(s, storage_state(array));
  const SurvivalTrace modesum = survival_modesum(s, w, times);
  const SurvivalTrace ode = survival_ode(ham, storage_state(array), times);

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < times.size(); ++i)
    rows.push_back({format_real(times(i)), format_real(modesum.p_e(i))});
  out.write_csv("survival_modesum.csv", "t,p_e", rows);

  rows.clear();
  for (int i = 0; i < times.size(); ++i)
    rows.push_back({format_real(times(i)), format_real(ode.p_e(i))});
  out.write_csv("survival_ode.csv", "t,p_e", rows);

  const Real max_dev = (modesum.p_e - ode.p_e).lpNorm<Eigen::Infinity>();
  out.write_csv("dynamics_summary.csv",
                "p_e_tstar,p_bar,t_star,max_modesum_ode_deviation",
                {{format_real(modesum.p_e(times.size() - 1)),
                  format_real(modesum.p_bar), format_real(modesum.t_star),
                  format_real(max_dev)}});
}

void cmd_optimize(json& config, OutputWriter& out, std::uint64_t seed,
                  int threads) {
  const AtomArray array = resolve_structure(config);
  if (!config.contains("optimize"))
    throw ConfigError("config needs an \"optimize\" section");
  const json& oc = config["optimize"];
  OptimizationProblem problem;
  problem.seed = array;
  problem.r_min = oc.value("r_min", 0.1);
  problem.params = resolve_surrogate(config);
  problem.max_iterations = oc.value("max_iterations", 500);
  const int n_runs = oc.value("n_runs", 100);
  const Real sigma = oc.value("sigma", 0.01);

  const MultiStartResult ms = multi_start(problem, n_runs, sigma, seed, threads);

  std::vector<std::vector<std::string>> rows;
  for (int run = 0; run < static_cast<int>(ms.runs.size()); ++run) {
    const OptimizationResult& r = ms.runs[run];
    rows.push_back({std::to_string(run), std::to_string(r.seed_id),
                    format_real(r.F_initial), format_real(r.F_final),
                    r.feasible ? "1" : "0", r.converged ? "1" : "0",
                    std::to_string(r.iterations_used),
                    format_real(min_pair_distance(r.final))});
  }
  out.write_csv("runs.csv",
                "run,seed,F_initial,F_final,feasible,converged,iterations,"
                "min_pair_distance",
                rows);

  const OptimizationResult& best = ms.best();
  json best_json = to_json(best);
  best_json["run"] = ms.best_index;
  best_json["master_seed"] = ms.master_seed;
  out.write_json("best_structure.json", best_json);

  rows.clear();
  for (size_t i = 0; i < best.cost_trace.size(); ++i)
    rows.push_back({std::to_string(i), format_real(best.cost_trace[i])});
  out.write_csv("cost_trace_best.csv", "iteration,F", rows);
}

void cmd_farfield(json& config, OutputWriter& out) {
  const AtomArray array = resolve_structure(config);
  int order = 64;
  std::vector<int> pattern_modes;
  bool refine = false;
  if (config.contains("farfield")) {
    order = config["farfield"].value("order", order);
    refine = config["farfield"].value("refinement_check", refine);
    if (config["farfield"].contains("pattern_modes"))
      pattern_modes =
          config["farfield"]["pattern_modes"].get<std::vector<int>>();
  }
  const EffectiveHamiltonian ham = build_hamiltonian(array);
  const SpectralData s = decompose(ham);
  const VecX err = gamma_pattern_check(array, s, order);

  std::vector<std::vector<std::string>> rows;
  for (int l = 0; l < s.n_modes(); ++l) {
    CVecX c = s.right_vecs.col(l);
    c /= c.norm();
    const RadiationPattern pat = integrated_pattern(array, c, order);
    rows.push_back({std::to_string(l),
                    format_real(s.decay_rates(l) / array.gamma0),
                    format_real(pat.integrated), format_real(err(l))});
  }
  out.write_csv("gamma_pattern.csv", "mode,gamma_over_gamma0,p_bar,error", rows);

  for (int l : pattern_modes) {
    if (l < 0 || l >= s.n_modes())
      throw ConfigError("pattern_modes index out of range");
    CVecX c = s.right_vecs.col(l);
    c /= c.norm();
    const RadiationPattern pat = integrated_pattern(array, c, order);
    rows.clear();
    for (size_t k = 0; k < pat.quadrature.directions.size(); ++k) {
      const Vec3& d = pat.quadrature.directions[k];
      rows.push_back({format_real(std::acos(d(2))),
                      format_real(std::atan2(d(1), d(0))),
                      format_real(pat.quadrature.weights(k)),
                      format_real(pat.intensities(k))});
    }
    out.write_csv("pattern_mode_" + std::to_string(l) + ".csv",
                  "theta,phi,weight,intensity", rows);
  }

  if (refine) {
    rows.clear();
    CVecX c = s.right_vecs.col(0);
    c /= c.norm();
    Real prev = 0;
    for (const int o : {order, 2 * order}) {
      const RadiationPattern pat = integrated_pattern(array, c, o);
      rows.push_back({std::to_string(o), format_real(pat.integrated),
                      rows.empty() ? "" : format_real(std::abs(
                                              pat.integrated - prev))});
      prev = pat.integrated;
    }
    out.write_csv("quadrature_refinement.csv", "order,p_bar,delta_from_previous",
                  rows);
  }
}

void cmd_study(json& config, OutputWriter& out, std::uint64_t seed,
               int threads) {
  if (!config.contains("study"))
    throw ConfigError("config needs a \"study\" section");
  const json& sc = config["study"];
  const std::string type = sc.value("type", "");
  const AtomArray array = resolve_structure(config);
  std::vector<std::vector<std::string>> rows;

  if (type == "robustness") {
    const VecX times = resolve_times(config);
    const EnsembleSummary es = robustness_ensemble(
        array, sc.value("sigma_xy", 0.001 / std::sqrt(2.0)),
        sc.value("sigma_z", 0.0), sc.value("n_trials", 100), times, seed,
        threads);
    for (int i = 0; i < times.size(); ++i) {
      rows.push_back({format_real(times(i)), format_real(es.p10(i)),
                      format_real(es.p50(i)), format_real(es.p90(i))});
    }
    out.write_csv("ensemble_band.csv", "t,p10,p50,p90", rows);
    out.write_csv("ensemble_summary.csv", "n_trials,n_failed,sigma_xy,sigma_z",
                  {{std::to_string(es.n_trials), std::to_string(es.n_failed),
                    format_real(es.sigma_xy), format_real(es.sigma_z)}});
  } else if (type == "correlation") {
    const CorrelationReport cr = correlation_study(
        array, sc.value("sigma", 0.01), sc.value("n_structures", 100),
        sc.value("t_star", 30.0), resolve_surrogate(config), seed, threads);
    for (size_t k = 0; k < cr.structures.size(); ++k) {
      const auto& r = cr.structures[k];
      rows.push_back({std::to_string(k), format_real(r.F),
                      format_real(r.min_rate), format_real(r.p_e_tstar),
                      format_real(r.p_bar)});
    }
    out.write_csv("correlation_table.csv",
                  "structure,F,min_gamma_over_gamma0,p_e_tstar,p_bar", rows);
    out.write_csv(
        "correlation_summary.csv",
        "r_F_pe,r_F_pbar,r_minrate_pe,r_minrate_pbar,n_failed",
        {{format_real(cr.r_F_pe), format_real(cr.r_F_pbar),
          format_real(cr.r_minrate_pe), format_real(cr.r_minrate_pbar),
          std::to_string(cr.n_failed)}});
  } else if (type == "seed_dependence") {
    OptimizationProblem problem;
    problem.seed = array;
    problem.r_min = sc.value("r_min", 0.2);
    problem.params = resolve_surrogate(config);
    const SeedDependence sd = seed_dependence_study(
        problem, sc.value("n_runs", 100), sc.value("sigma", 0.01), seed,
        threads);
    for (const auto& r : sd.rows) {
      rows.push_back({std::to_string(r.run), format_real(r.w_max_abs),
                      format_real(r.rate_of_max), format_real(r.F_final),
                      r.feasible ? "1" : "0",
                      std::to_string(sd.cluster_of_run[r.run])});
    }
    out.write_csv("seed_dependence.csv",
                  "run,w_max_abs,gamma_of_max,F_final,feasible,cluster", rows);
    if (sd.representative_run >= 0) {
      json rep = to_json(sd.optimization.runs[sd.representative_run]);
      rep["run"] = sd.representative_run;
      rep["cluster"] = sd.modal_cluster;
      out.write_json("representative_structure.json", rep);
    }
  } else {
    throw ConfigError(
        "study.type must be robustness | correlation | seed_dependence");
  }
}

}  // namespace

json run_command(const std::string& command, const CliOptions& opts) {
  json config = json::object();
  if (!opts.config_path.empty()) {
    config = load_json_file(opts.config_path);
    // accept a previous run's manifest as config
    if (config.contains("config") && config.contains("command")) {
      if (config["command"].get<std::string>() != command)
        throw ConfigError("manifest command mismatch: expected " +
                          config["command"].get<std::string>());
      config = config["config"];
    }
  }
  if (opts.seed) config["seed"] = *opts.seed;
  if (!config.contains("seed")) {
    std::random_device rd;
    config["seed"] = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  const std::uint64_t seed = config["seed"].get<std::uint64_t>();
  int threads = opts.threads.value_or(config.value("threads", 0));
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  config["threads"] = threads;

  OutputWriter out(opts.out_dir, command);
  if (command == "spectrum") {
    cmd_spectrum(config, out);
  } else if (command == "dynamics") {
    cmd_dynamics(config, out);
  } else if (command == "optimize") {
    cmd_optimize(config, out, seed, threads);
  } else if (command == "farfield") {
    cmd_farfield(config, out);
  } else if (command == "study") {
    cmd_study(config, out, seed, threads);
  } else {
    throw ConfigError("unknown command: " + command);
  }
  out.finish(config);  // config may have been enriched (inlined structure)
  return config;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Collective-emission retention simulator and inverse design"};
  app.require_subcommand(1);

  CliOptions opts;
  std::string seed_str;
  for (const char* name :
       {"spectrum", "dynamics", "optimize", "farfield", "study"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config_path, "config JSON (or manifest)");
    sub->add_option("--out", opts.out_dir, "output directory")->required();
    sub->add_option("--seed", seed_str, "master RNG seed (u64)");
    sub->add_option("--threads", opts.threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!seed_str.empty()) opts.seed = std::stoull(seed_str);
    run_command(app.get_subcommands().front()->get_name(), opts);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const InfeasibleSeed& e) {
    std::fprintf(stderr, "infeasible optimization: %s\n", e.what());
    return 4;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace subrad
