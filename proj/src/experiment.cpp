#include "soilrl/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "soilrl/env.hpp"
#include "soilrl/errors.hpp"
#include "soilrl/text.hpp"

namespace soilrl {

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SOILRL_OUT_DIR"); env && *env) return env;
  return "out";
}

std::string csv_preamble(const ScenarioConfig& cfg, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream out;
  std::istringstream lines(format_scenario(cfg));
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  for (const auto& [k, v] : extra) out << "# " << k << " = " << v << '\n';
  return out.str();
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ParseError("CSV has no column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    for (auto c : split(line, ',')) cells.emplace_back(trim(c));
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size())
        throw ParseError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                         std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.header.empty()) throw ParseError("CSV has no header row");
  return t;
}

namespace {

std::string path_in(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

double cell_double(const CsvTable& t, std::size_t row, std::string_view col) {
  double v = 0.0;
  const auto& s = t.rows.at(row)[t.column(col)];
  if (!parse_double(s, v)) throw ParseError("column '" + std::string(col) + "' holds non-numeric '" + s + "'");
  return v;
}

double feature_scale(NormalizationMode mode, std::size_t i) {
  return mode == NormalizationMode::kFeatureScaled ? kFeatureScales[i] : 10.0;
}

}  // namespace

SimOptResult run_simopt(const ScenarioConfig& cfg, const SimOptRequest& req, const std::string& out_dir) {
  const SimOptResult res = optimize(cfg, req.z_min, req.z_max, req.replications, req.threads);
  const std::vector<std::pair<std::string, std::string>> extra{{"replications", std::to_string(req.replications)},
                                                               {"z_min", std::to_string(req.z_min)},
                                                               {"z_max", std::to_string(req.z_max)}};
  std::ostringstream curve;
  curve << csv_preamble(cfg, extra) << "z,mean_total_cost,stderr_total_cost,mean_cleanings\n";
  for (const auto& e : res.curve)
    curve << e.z << ',' << format_double(e.mean_total_cost) << ',' << format_double(e.stderr_total_cost) << ','
          << format_double(e.mean_cleanings) << '\n';
  write_text_file(path_in(out_dir, cfg.name + "_simopt_curve.csv"), curve.str());

  const auto& best = res.best();
  std::ostringstream summary;
  summary << csv_preamble(cfg, extra) << "case,z_star,mean_total_cost,stderr_total_cost,mean_cleanings\n"
          << cfg.name << ',' << res.z_star << ',' << format_double(best.mean_total_cost) << ','
          << format_double(best.stderr_total_cost) << ',' << format_double(best.mean_cleanings) << '\n';
  write_text_file(path_in(out_dir, cfg.name + "_simopt_summary.csv"), summary.str());
  return res;
}

TrainResult run_train(AgentKind kind, const ScenarioConfig& cfg, const TrainOptions& opt, const std::string& out_dir) {
  TrainResult res = train(kind, cfg, opt);
  const std::string agent(to_string(kind));

  PolicyFile pf;
  pf.agent = agent;
  pf.normalization_mode = cfg.normalization_mode;
  pf.include_humidity = cfg.include_humidity;
  pf.scenario = cfg.name;
  pf.training_episodes = opt.episodes;
  pf.seed = cfg.seed;
  pf.actor = res.best_actor;
  save_policy_file(pf, path_in(out_dir, cfg.name + "_" + agent + "_policy.txt"));

  std::ostringstream csv;
  csv << csv_preamble(cfg, {{"agent", agent},
                            {"episodes", std::to_string(opt.episodes)},
                            {"smoothing_window", std::to_string(opt.smoothing_window)},
                            {"best_episode", std::to_string(res.best_episode)},
                            {"gradient_steps", std::to_string(res.gradient_steps)}})
      << "episode,total_reward,total_cost,cleanings,smoothed_reward\n";
  for (const auto& r : res.curve)
    csv << r.episode << ',' << format_double(r.total_reward) << ',' << format_double(r.total_cost) << ','
        << r.cleanings << ',' << format_double(r.smoothed_reward) << '\n';
  write_text_file(path_in(out_dir, cfg.name + "_" + agent + "_rewards.csv"), csv.str());
  return res;
}

EvaluationResult run_eval(const std::string& policy_path, ScenarioConfig cfg, int episodes,
                          std::optional<std::uint64_t> seed, const std::string& out_dir, unsigned threads) {
  const PolicyFile pf = load_policy_file(policy_path);
  cfg.normalization_mode = pf.normalization_mode;
  cfg.include_humidity = pf.include_humidity;
  if (pf.actor.input_dim() != (cfg.include_humidity ? 7u : 6u))
    throw ConfigError("policy input size does not match the scenario observation");
  const std::uint64_t base = seed ? *seed : evaluation_seed(cfg);
  const ActorPolicy policy(pf.actor);
  const EvaluationResult res = evaluate(policy, cfg, episodes, base, EvalMode::kGreedy, threads);

  std::ostringstream csv;
  csv << csv_preamble(cfg, {{"policy_scenario", pf.scenario},
                            {"evaluation_base_seed", std::to_string(base)},
                            {"mode", "greedy"}})
      << "case,agent,episodes,training_episodes,mean_total_cost,stderr_total_cost,mean_cleanings\n"
      << cfg.name << ',' << pf.agent << ',' << episodes << ',' << pf.training_episodes << ','
      << format_double(res.mean_total_cost) << ',' << format_double(res.stderr_total_cost) << ','
      << format_double(res.mean_cleanings) << '\n';
  write_text_file(path_in(out_dir, cfg.name + "_" + pf.agent + "_eval.csv"), csv.str());
  return res;
}

double cost_saving(double simopt_cost, double rl_cost) {
  if (simopt_cost == 0.0) throw std::domain_error("cost saving is undefined when the Sim-Opt cost is 0");
  return (simopt_cost - rl_cost) / simopt_cost;
}

std::vector<CaseResult> run_report(const std::string& results_dir, const std::string& out_dir,
                                   const std::string& agent) {
  std::vector<CaseResult> rows;
  for (const auto& name : preset_names()) {
    CaseResult c;
    c.name = name;
    const auto so = path_in(results_dir, name + "_simopt_summary.csv");
    const auto ev = path_in(results_dir, name + "_" + agent + "_eval.csv");
    if (std::filesystem::exists(so) && std::filesystem::exists(ev)) {
      const CsvTable s = parse_csv(read_text_file(so));
      const CsvTable e = parse_csv(read_text_file(ev));
      if (!s.rows.empty() && !e.rows.empty()) {
        c.z_star = static_cast<int>(cell_double(s, 0, "z_star"));
        c.simopt_cost = cell_double(s, 0, "mean_total_cost");
        c.simopt_cleanings = cell_double(s, 0, "mean_cleanings");
        c.rl_cost = cell_double(e, 0, "mean_total_cost");
        c.rl_cleanings = cell_double(e, 0, "mean_cleanings");
        c.training_episodes = static_cast<std::int64_t>(cell_double(e, 0, "training_episodes"));
        c.cost_saving = cost_saving(c.simopt_cost, c.rl_cost);
        c.complete = true;
      }
    }
    rows.push_back(c);
  }

  std::ostringstream csv;
  csv << "# results_dir = " << results_dir << "\n# agent = " << agent << '\n'
      << "case,status,simopt_z_star,simopt_mean_cleanings,simopt_mean_cost,rl_mean_cleanings,rl_mean_cost,"
         "cost_saving,training_episodes\n";
  for (const auto& c : rows) {
    csv << c.name << ',' << (c.complete ? "ok" : "incomplete");
    if (c.complete)
      csv << ',' << c.z_star << ',' << format_double(c.simopt_cleanings) << ',' << format_double(c.simopt_cost) << ','
          << format_double(c.rl_cleanings) << ',' << format_double(c.rl_cost) << ',' << format_double(c.cost_saving)
          << ',' << c.training_episodes << '\n';
    else
      csv << ",,,,,,,\n";
  }
  write_text_file(path_in(out_dir, "report.csv"), csv.str());
  return rows;
}

std::string run_trace(const std::string& policy_path, std::optional<int> interval, ScenarioConfig cfg,
                      std::uint64_t episode_seed, const std::string& out_dir) {
  std::unique_ptr<Policy> policy;
  std::string source;
  if (interval) {
    policy = std::make_unique<FixedIntervalPolicy>(*interval, cfg.normalization_mode);
    source = "fixed_interval " + std::to_string(*interval);
  } else {
    const PolicyFile pf = load_policy_file(policy_path);
    cfg.normalization_mode = pf.normalization_mode;
    cfg.include_humidity = pf.include_humidity;
    policy = std::make_unique<ActorPolicy>(pf.actor);
    source = pf.agent + " " + policy_path;
  }

  const auto mode = cfg.normalization_mode;
  std::ostringstream csv;
  csv << csv_preamble(cfg, {{"policy", source}, {"episode_seed", std::to_string(episode_seed)}})
      << "day,month,action,deposition,days_since_clean,temperature,wind_speed,particulate_matter,irradiance,"
         "daily_cost\n";
  SoilingEnv env(cfg);
  run_episode(
      env, episode_seed, [&](const Observation& obs, const EnvState&) { return policy->act(obs); },
      [&](const Observation&, int a, const StepResult& r) {
        const auto& w = r.info.weather;
        const std::int64_t day = env.state().day_index - 1;
        csv << day << ',' << month_of_day(day, cfg.start_month) << ',' << a << ','
            << format_double(r.observation[0]) << ',' << format_double(r.observation[1]) << ','
            << format_double(w.temperature / feature_scale(mode, 2)) << ','
            << format_double(w.wind_speed / feature_scale(mode, 3)) << ','
            << format_double(w.particulate_matter / feature_scale(mode, 4)) << ','
            << format_double(w.irradiance / feature_scale(mode, 5)) << ','
            << format_double(r.info.energy_loss_cost + r.info.cleaning_cost_incurred) << '\n';
      });
  write_text_file(path_in(out_dir, cfg.name + "_trace.csv"), csv.str());
  return csv.str();
}

CalibrationResult calibrate_panel_area(double target_cost, double lo, double hi, int iterations, int replications,
                                       unsigned threads) {
  if (!(lo > 0.0 && lo < hi)) throw ConfigError("need 0 < lo < hi");
  if (iterations < 1) throw ConfigError("iterations must be positive");
  ScenarioConfig cfg = preset("S3exp");
  CalibrationResult out;
  for (int i = 0; i < iterations; ++i) {
    cfg.panel_area = 0.5 * (lo + hi);
    const SimOptResult r = optimize(cfg, 1, 120, replications, threads);
    out = {cfg.panel_area, r.best().mean_total_cost, r.z_star, i + 1};
    // The optimal cost grows with area: more area, more energy lost per gram.
    if (out.optimum_cost > target_cost)
      hi = cfg.panel_area;
    else
      lo = cfg.panel_area;
  }
  return out;
}

}  // namespace soilrl
