#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgeserve/catalog.hpp"
#include "edgeserve/errors.hpp"
#include "edgeserve/experiment.hpp"
#include "edgeserve/policy.hpp"
#include "edgeserve/simcost.hpp"
#include "edgeserve/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnknownPolicy = 3;

namespace fs = std::filesystem;
using edgeserve::experiment::ExperimentConfig;

unsigned thread_cap_from_env() {
  const char* value = std::getenv("EDGESERVE_SIM_THREADS");
  if (value == nullptr) return 0;
  const long parsed = std::strtol(value, nullptr, 10);
  return parsed > 0 ? static_cast<unsigned>(parsed) : 0;
}

void print_breakdown(const std::string& label,
                     const edgeserve::simcost::RunMetrics& m) {
  std::printf("%-24s %s\n", "Policy", label.c_str());
  std::printf("%-24s %.4f\n", "System cost", m.costs.system_cost());
  std::printf("%-24s %.4f\n", "Switching cost", m.costs.switching_cost);
  std::printf("%-24s %.4f\n", "Total accuracy cost", m.costs.total_accuracy_cost);
  std::printf("%-24s %.4f\n", "Average accuracy cost", m.average_accuracy_cost);
  std::printf("%-24s %.4f\n", "Inference latency",
              m.costs.edge_inference_latency_cost);
  std::printf("%-24s %.4f\n", "Offloading latency",
              m.costs.edge_offloading_latency_cost);
  std::printf("%-24s %.4f\n", "Cloud cost", m.costs.cloud_cost);
  std::printf("%-24s %.1f%%\n", "Edge Execution Ratio",
              100.0 * m.edge_execution_ratio);
}

int cmd_gen_trace(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = edgeserve::experiment::load_experiment(config_path);
  if (!cfg.workload_cfg) {
    throw edgeserve::ConfigError("gen-trace needs an inline workload");
  }
  const auto trace =
      edgeserve::experiment::trace_for_seed(cfg, cfg.seeds.front());
  fs::create_directories(out_dir);
  edgeserve::workload::write_trace(trace, (fs::path(out_dir) / "trace.csv").string());
  std::cout << trace.size() << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& policy_name,
                 const std::string& out_dir, bool log) {
  auto cfg = edgeserve::experiment::load_experiment(config_path);
  edgeserve::policy::PolicyKind policy = cfg.policies.front();
  if (!policy_name.empty()) {
    try {
      policy = edgeserve::policy::policy_from_string(policy_name);
    } catch (const edgeserve::ConfigError&) {
      std::cerr << "unknown policy '" << policy_name << "'\n";
      return kExitUnknownPolicy;
    }
  }
  if (log) cfg.options.keep_log = true;

  fs::create_directories(out_dir);
  edgeserve::experiment::PolicyResult result;
  result.policy = policy;
  for (const auto seed : cfg.seeds) {
    auto run = edgeserve::experiment::run_one(cfg, policy, seed);
    result.per_seed.push_back(run.metrics);
    if (cfg.options.keep_log) {
      const auto log_path =
          fs::path(out_dir) / ("requests_" + edgeserve::policy::to_string(policy) +
                               "_seed" + std::to_string(seed) + ".csv");
      edgeserve::simcost::write_request_log(run.log, log_path.string());
    }
  }
  result.mean = edgeserve::experiment::mean_metrics(result.per_seed);

  const auto doc =
      edgeserve::experiment::policy_result_to_json(result, cfg.seeds);
  edgeserve::experiment::write_file_atomic(
      (fs::path(out_dir) / "metrics.json").string(), doc.dump(2) + "\n");

  print_breakdown(edgeserve::policy::to_string(policy), result.mean);
  return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = edgeserve::experiment::load_experiment(config_path);
  const auto results =
      edgeserve::experiment::compare_policies(cfg, thread_cap_from_env());

  fs::create_directories(out_dir);
  edgeserve::experiment::write_file_atomic(
      (fs::path(out_dir) / "comparison.csv").string(),
      edgeserve::experiment::comparison_csv(results, cfg.seeds));

  // Summary table, one column per policy, Table-style row order.
  std::printf("%-24s", "");
  for (const auto& r : results) {
    std::printf(" %12s", edgeserve::policy::to_string(r.policy).c_str());
  }
  std::printf("\n");
  auto row = [&](const char* name, auto getter, bool percent = false) {
    std::printf("%-24s", name);
    for (const auto& r : results) {
      const double v = getter(r.mean);
      if (percent) {
        std::printf(" %11.1f%%", 100.0 * v);
      } else {
        std::printf(" %12.4f", v);
      }
    }
    std::printf("\n");
  };
  using edgeserve::simcost::RunMetrics;
  row("System cost", [](const RunMetrics& m) { return m.costs.system_cost(); });
  row("Switching cost",
      [](const RunMetrics& m) { return m.costs.switching_cost; });
  row("Total accuracy cost",
      [](const RunMetrics& m) { return m.costs.total_accuracy_cost; });
  row("Average accuracy cost",
      [](const RunMetrics& m) { return m.average_accuracy_cost; });
  row("Inference latency",
      [](const RunMetrics& m) { return m.costs.edge_inference_latency_cost; });
  row("Offloading latency",
      [](const RunMetrics& m) { return m.costs.edge_offloading_latency_cost; });
  row("Cloud cost", [](const RunMetrics& m) { return m.costs.cloud_cost; });
  row("Edge Execution Ratio",
      [](const RunMetrics& m) { return m.edge_execution_ratio; }, true);

  auto ranked = results;
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.mean.costs.system_cost() != b.mean.costs.system_cost()) {
      return a.mean.costs.system_cost() < b.mean.costs.system_cost();
    }
    return edgeserve::policy::to_string(a.policy) <
           edgeserve::policy::to_string(b.policy);
  });
  std::printf("Ranking by mean system cost:");
  for (const auto& r : ranked) {
    std::printf(" %s", edgeserve::policy::to_string(r.policy).c_str());
  }
  std::printf("\n");
  return kExitOk;
}

int cmd_calibrate(const std::string& catalog_path) {
  const auto models = catalog_path.empty() || catalog_path == "builtin"
                          ? edgeserve::catalog::builtin_catalog()
                          : edgeserve::catalog::load_catalog(catalog_path);
  std::printf("%-14s %-18s %8s %8s %8s  accuracy at K\n", "model", "task", "a0",
              "a1_gain", "alpha");
  for (const auto& model : models) {
    if (model.context_window == 0) continue;
    for (const auto& task : model.tasks) {
      try {
        const auto curve =
            edgeserve::catalog::calibrate_accuracy(task, model.context_window);
        std::printf("%-14s %-18s %8.3f %8.3f %8.4f ", model.id.c_str(),
                    task.task_id.c_str(), curve.a0, curve.a1_gain, curve.alpha);
        const int k_ref = task.few_shot_k.value_or(model.context_window);
        std::printf(" %.2f@0 %.2f@1", edgeserve::catalog::accuracy_at(curve, 0),
                    edgeserve::catalog::accuracy_at(curve, 1));
        for (int k = 2; k <= k_ref; k *= 2) {
          std::printf(" %.2f@%d", edgeserve::catalog::accuracy_at(curve, k), k);
        }
        if (task.few_shot_k && ((k_ref & (k_ref - 1)) != 0)) {
          std::printf(" %.2f@%d", edgeserve::catalog::accuracy_at(curve, k_ref),
                      k_ref);
        }
        std::printf("\n");
      } catch (const edgeserve::CalibrationError& e) {
        std::printf("%-14s %-18s non-calibratable: %s\n", model.id.c_str(),
                    task.task_id.c_str(), e.what());
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven edge model-cache simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string policy_name;
  std::string out_dir = ".";
  bool log = false;

  auto* gen = app.add_subcommand("gen-trace", "Generate a request trace");
  gen->add_option("--config", config_path, "Experiment config JSON")->required();
  gen->add_option("--out", out_dir, "Output directory");

  auto* sim = app.add_subcommand("simulate", "Run one policy over all seeds");
  sim->add_option("--config", config_path, "Experiment config JSON")->required();
  sim->add_option("--policy", policy_name, "random|cloud|fifo|lfu|lc");
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_flag("--log", log, "Write per-request logs");

  auto* cmp = app.add_subcommand("compare", "Run every policy over all seeds");
  cmp->add_option("--config", config_path, "Experiment config JSON")->required();
  cmp->add_option("--out", out_dir, "Output directory");

  auto* cal = app.add_subcommand("calibrate", "Print accuracy calibration");
  cal->add_option("--config", config_path, "Catalog JSON path or 'builtin'");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_trace(config_path, out_dir);
    if (sim->parsed()) return cmd_simulate(config_path, policy_name, out_dir, log);
    if (cmp->parsed()) return cmd_compare(config_path, out_dir);
    if (cal->parsed()) return cmd_calibrate(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
