// soilrl: command-line runner for the soiling experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "soilrl/errors.hpp"
#include "soilrl/experiment.hpp"
#include "soilrl/text.hpp"
#include "soilrl/weather.hpp"

using namespace soilrl;

namespace {

struct CaseFlags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  int horizon = 5;
  std::string reward_mode;
  std::string norm_mode;
  bool humidity = false;

  void add(CLI::App* app, bool modes) {
    app->add_option("case", scenario, "Preset name (S1exp..S5uae) or scenario file")->required();
    app->add_option("--seed", seed, "Scenario seed");
    app->add_option("--horizon", horizon, "Horizon in years")->check(CLI::Range(1, 100))->capture_default_str();
    if (modes) {
      app->add_option("--reward-mode", reward_mode, "per_step or terminal");
      app->add_option("--norm-mode", norm_mode, "feature_scaled or paper_div10");
      app->add_flag("--humidity", humidity, "Add relative humidity to the observation");
    }
  }

  ScenarioConfig resolve() const {
    ScenarioConfig cfg = resolve_scenario(scenario);
    if (seed) cfg.seed = *seed;
    cfg.horizon_years = horizon;
    if (!reward_mode.empty()) cfg.reward_mode = parse_reward_mode(reward_mode);
    if (!norm_mode.empty()) cfg.normalization_mode = parse_normalization_mode(norm_mode);
    if (humidity) cfg.include_humidity = true;
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soiling cleaning-schedule experiments: fixed-interval simulation optimization and RL agents"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--out", out_flag, "Output directory (default $SOILRL_OUT_DIR or ./out)");
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  // simopt
  auto* simopt = app.add_subcommand("simopt", "Exhaustive search over fixed cleaning intervals");
  CaseFlags simopt_case;
  simopt_case.add(simopt, false);
  SimOptRequest sreq;
  simopt->add_option("--reps", sreq.replications, "Replications per interval")->capture_default_str();
  simopt->add_option("--zmin", sreq.z_min, "Smallest interval")->capture_default_str();
  simopt->add_option("--zmax", sreq.z_max, "Largest interval")->capture_default_str();

  // train
  auto* trainc = app.add_subcommand("train", "Train a PPO or SAC agent");
  std::string agent_name;
  trainc->add_option("agent", agent_name, "ppo or sac")->required()->check(CLI::IsMember({"ppo", "sac"}));
  CaseFlags train_case;
  train_case.add(trainc, true);
  int episodes = 0;
  trainc->add_option("--episodes", episodes, "Training episodes (default: ppo 500, sac 10)");
  TrainOptions topt;
  topt.sac.update_interval = 20;
  trainc->add_option("--smoothing", topt.smoothing_window, "Reward smoothing window")->capture_default_str();
  trainc->add_option("--sac-update-interval", topt.sac.update_interval, "Env steps per SAC gradient step")
      ->capture_default_str();
  trainc->add_option("--sac-warmup", topt.sac.warmup_steps, "SAC warmup steps")->capture_default_str();
  topt.sac.update_interval = 20;

  // eval
  auto* evalc = app.add_subcommand("eval", "Greedy evaluation of a saved policy");
  std::string eval_policy;
  evalc->add_option("policy", eval_policy, "Policy file")->required()->check(CLI::ExistingFile);
  CaseFlags eval_case;
  eval_case.add(evalc, false);
  int eval_episodes = 30;
  evalc->add_option("--episodes", eval_episodes, "Evaluation episodes")->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "Cost-saving table across the ten presets");
  std::string results_dir;
  report->add_option("results", results_dir, "Directory holding simopt summaries and eval CSVs")->required();
  std::string report_agent = "ppo";
  report->add_option("--agent", report_agent, "Agent whose eval CSVs to read")->capture_default_str();

  // trace
  auto* trace = app.add_subcommand("trace", "Per-day decision trace of one episode");
  CaseFlags trace_case;
  trace_case.add(trace, false);
  std::string trace_policy;
  std::optional<int> trace_interval;
  auto* tp = trace->add_option("--policy", trace_policy, "Policy file")->check(CLI::ExistingFile);
  auto* ti = trace->add_option("--interval", trace_interval, "Fixed cleaning interval instead of a policy");
  tp->excludes(ti);
  ti->excludes(tp);

  // calibrate
  auto* calib = app.add_subcommand("calibrate", "Fit panel area to the S3exp optimum over 20 years");
  double target = 24.8, lo = 0.05, hi = 2.0;
  int iters = 12, calib_reps = 30;
  calib->add_option("--target", target, "Target optimal cost (USD)")->capture_default_str();
  calib->add_option("--lo", lo, "Lower area bound (m^2)")->capture_default_str();
  calib->add_option("--hi", hi, "Upper area bound (m^2)")->capture_default_str();
  calib->add_option("--iters", iters, "Bisection steps")->capture_default_str();
  calib->add_option("--reps", calib_reps, "Replications per interval")->capture_default_str();

  // weather
  auto* weather = app.add_subcommand("weather", "Write the built-in monthly weather model as CSV");
  std::string weather_path;
  weather->add_option("path", weather_path, "Output file (default <out>/weather_abu_dhabi.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string out = output_dir(out_flag);
    if (simopt->parsed()) {
      sreq.threads = threads;
      const auto cfg = simopt_case.resolve();
      const auto r = run_simopt(cfg, sreq, out);
      std::printf("%s z_star=%d mean_cost=%s mean_cleanings=%s\n", cfg.name.c_str(), r.z_star,
                  format_double(r.best().mean_total_cost).c_str(), format_double(r.best().mean_cleanings).c_str());
    } else if (trainc->parsed()) {
      const AgentKind kind = parse_agent_kind(agent_name);
      topt.episodes = episodes > 0 ? episodes : (kind == AgentKind::kPPO ? 500 : 10);
      const auto cfg = train_case.resolve();
      topt.on_episode = [](const EpisodeRecord& r) {
        if (r.episode % 50 == 0)
          std::fprintf(stderr, "episode %d reward %.4f smoothed %.4f cleanings %lld\n", r.episode, r.total_reward,
                       r.smoothed_reward, static_cast<long long>(r.cleanings));
      };
      const auto r = run_train(kind, cfg, topt, out);
      std::printf("%s %s best_episode=%d best_smoothed_reward=%s\n", cfg.name.c_str(), agent_name.c_str(),
                  r.best_episode, format_double(r.best_smoothed_reward).c_str());
    } else if (evalc->parsed()) {
      const auto cfg = eval_case.resolve();
      const auto r = run_eval(eval_policy, cfg, eval_episodes, std::nullopt, out, threads);
      std::printf("%s mean_cost=%s mean_cleanings=%s\n", cfg.name.c_str(), format_double(r.mean_total_cost).c_str(),
                  format_double(r.mean_cleanings).c_str());
    } else if (report->parsed()) {
      const auto rows = run_report(results_dir, out, report_agent);
      bool complete = true;
      for (const auto& c : rows) {
        complete = complete && c.complete;
        if (c.complete)
          std::printf("%-6s A=%.3f B=%.3f saving=%.1f%%\n", c.name.c_str(), c.simopt_cost, c.rl_cost,
                      100.0 * c.cost_saving);
        else
          std::printf("%-6s incomplete\n", c.name.c_str());
      }
      return complete ? kExitOk : kExitPartial;
    } else if (trace->parsed()) {
      if (trace_policy.empty() && !trace_interval) throw ConfigError("trace needs --policy or --interval");
      const auto cfg = trace_case.resolve();
      run_trace(trace_policy, trace_interval, cfg, replication_seed(evaluation_seed(cfg), 0), out);
      std::printf("wrote %s_trace.csv\n", cfg.name.c_str());
    } else if (calib->parsed()) {
      const auto r = calibrate_panel_area(target, lo, hi, iters, calib_reps, threads);
      std::printf("panel_area=%s optimum_cost=%s z_star=%d\n", format_double(r.panel_area).c_str(),
                  format_double(r.optimum_cost).c_str(), r.z_star);
    } else if (weather->parsed()) {
      const std::string path = weather_path.empty() ? out + "/weather_abu_dhabi.csv" : weather_path;
      write_text_file(path, format_weather_model(MonthlyWeatherModel::abu_dhabi()));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
