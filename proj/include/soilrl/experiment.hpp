#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soilrl/agents.hpp"
#include "soilrl/config.hpp"
#include "soilrl/policy.hpp"
#include "soilrl/simopt.hpp"

namespace soilrl {

/// Exit codes shared by the CLI commands.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitPartial = 3 };

/// `flag` if set, else $SOILRL_OUT_DIR, else "out".
std::string output_dir(const std::string& flag = "");

/// "# key = value" lines for the scenario followed by `extra` pairs.
std::string csv_preamble(const ScenarioConfig& cfg,
                         const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Comment-stripped CSV: first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
};
CsvTable parse_csv(std::string_view text);

struct SimOptRequest {
  int replications = 30;
  int z_min = 1;
  int z_max = 120;
  unsigned threads = 0;
};

/// Writes <out>/<case>_simopt_curve.csv and <case>_simopt_summary.csv.
SimOptResult run_simopt(const ScenarioConfig& cfg, const SimOptRequest& req, const std::string& out_dir);

/// Writes <out>/<case>_<agent>_policy.txt (best checkpoint) and
/// <case>_<agent>_rewards.csv.
TrainResult run_train(AgentKind kind, const ScenarioConfig& cfg, const TrainOptions& opt, const std::string& out_dir);

/// Evaluates a saved policy (greedy) on `cfg` with the policy's observation
/// convention. `seed` overrides the evaluation base seed. Writes
/// <out>/<case>_<agent>_eval.csv.
EvaluationResult run_eval(const std::string& policy_path, ScenarioConfig cfg, int episodes,
                          std::optional<std::uint64_t> seed, const std::string& out_dir, unsigned threads = 0);

struct CaseResult {
  std::string name;
  bool complete = false;
  int z_star = 0;
  double simopt_cleanings = 0.0;
  double simopt_cost = 0.0;  // A
  double rl_cleanings = 0.0;
  double rl_cost = 0.0;  // B
  double cost_saving = 0.0;  // (A - B) / A
  std::int64_t training_episodes = 0;
};

double cost_saving(double simopt_cost, double rl_cost);

/// Reads per-case summaries from `results_dir` for the ten presets and writes
/// <out>/report.csv. Missing cases are flagged `incomplete`.
std::vector<CaseResult> run_report(const std::string& results_dir, const std::string& out_dir,
                                   const std::string& agent = "ppo");

/// Per-day trace of one episode: the action plus the normalized state after
/// it (deposition, days since clean, the day's weather). Uses a saved actor
/// (greedy) or, when `interval` is set, a fixed cleaning interval.
/// Writes <out>/<case>_trace.csv and returns its contents.
std::string run_trace(const std::string& policy_path, std::optional<int> interval, ScenarioConfig cfg,
                      std::uint64_t episode_seed, const std::string& out_dir);

struct CalibrationResult {
  double panel_area = 0.0;
  double optimum_cost = 0.0;
  int z_star = 0;
  int iterations = 0;
};

/// Bisects panel_area so the S3exp optimum over the full horizon hits
/// `target_cost`.
CalibrationResult calibrate_panel_area(double target_cost, double lo, double hi, int iterations, int replications,
                                       unsigned threads = 0);

}  // namespace soilrl
