#include "edgeserve/simcost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "edgeserve/errors.hpp"
#include "edgeserve/rng.hpp"

namespace edgeserve::simcost {

namespace {

double task_gflops(const catalog::ModelProfile& profile,
                   const std::string& task_id) {
  const auto* task = profile.find_task(task_id);
  if (task != nullptr && task->gflops_per_inference) {
    return *task->gflops_per_inference;
  }
  return profile.gflops_per_inference;
}

}  // namespace

EdgeRequestCost request_cost_edge(const catalog::ModelProfile& profile,
                                  const std::string& task_id,
                                  const catalog::AccuracyModel& accuracy_model,
                                  double k_eff,
                                  const edgecache::EdgeServerConfig& server_cfg,
                                  const CostWeights& weights, double gamma) {
  EdgeRequestCost cost;
  cost.inference_latency_s = task_gflops(profile, task_id) *
                             (1.0 + gamma * k_eff) /
                             server_cfg.edge_throughput_gflops;
  cost.offload_latency_s = weights.access_latency_s;
  cost.accuracy = catalog::accuracy_at(accuracy_model, k_eff);
  cost.accuracy_cost = (100.0 - cost.accuracy) / 100.0;
  return cost;
}

CloudRequestCost request_cost_cloud(const catalog::ModelProfile& profile,
                                    const CostWeights& weights) {
  CloudRequestCost cost;
  cost.cloud_cost = weights.w_cloud + weights.w_off * weights.core_latency_s;
  cost.offload_cost = weights.w_off * weights.access_latency_s;
  cost.compute_latency_s =
      profile.gflops_per_inference / weights.cloud_throughput_gflops;
  return cost;
}

RunMetrics aggregate_metrics(const CostBreakdown& costs,
                             std::uint64_t edge_executions,
                             std::uint64_t cloud_executions,
                             std::uint64_t model_loads) {
  RunMetrics metrics;
  metrics.costs = costs;
  metrics.edge_executions = edge_executions;
  metrics.cloud_executions = cloud_executions;
  metrics.model_loads = model_loads;
  metrics.request_count = edge_executions + cloud_executions;
  if (metrics.request_count > 0) {
    const double n = static_cast<double>(metrics.request_count);
    metrics.average_accuracy_cost = costs.total_accuracy_cost / n;
    metrics.edge_execution_ratio = static_cast<double>(edge_executions) / n;
  }
  return metrics;
}

std::map<std::pair<std::string, std::string>, catalog::AccuracyModel>
build_accuracy_table(const catalog::Catalog& models) {
  std::map<std::pair<std::string, std::string>, catalog::AccuracyModel> table;
  for (const auto& model : models) {
    for (const auto& task : model.tasks) {
      catalog::AccuracyModel curve;
      try {
        curve = catalog::calibrate_accuracy(task, model.context_window);
      } catch (const CalibrationError&) {
        catalog::TaskProfile truncated = task;
        truncated.few_shot_score.reset();
        truncated.few_shot_k.reset();
        curve = catalog::calibrate_accuracy(truncated, model.context_window);
      }
      table.emplace(std::make_pair(model.id, task.task_id), curve);
    }
  }
  return table;
}

RunResult run_simulation(const catalog::Catalog& models,
                         const workload::Trace& trace,
                         const edgecache::EdgeServerConfig& server_cfg,
                         const context::AoCConfig& aoc_cfg,
                         const CostWeights& weights,
                         policy::PolicyKind policy_kind,
                         const SimOptions& options) {
  const auto accuracy_table = build_accuracy_table(models);

  edgecache::CacheState cache;
  context::ContextStore store;
  Xoshiro256 rng(options.policy_seed);

  CostBreakdown costs;
  std::uint64_t edge_executions = 0;
  std::uint64_t cloud_executions = 0;
  std::uint64_t model_loads = 0;

  RunResult result;
  if (options.keep_log) result.log.reserve(trace.size());

  for (const auto& request : trace) {
    const auto& profile = catalog::find_model(models, request.model_id);
    const double now = request.arrival_time_s;

    const auto decision =
        policy::decide(policy_kind, cache, store, aoc_cfg, server_cfg, profile,
                       now, rng, options.offload_on_miss);

    RequestRecord record;
    record.request_id = request.request_id;
    record.arrival_time_s = now;
    record.model_id = request.model_id;
    record.task_id = request.task_id;

    double completion = now;
    if (decision.offload_to_cloud) {
      const auto cloud = request_cost_cloud(profile, weights);
      costs.cloud_cost += cloud.cloud_cost;
      costs.edge_offloading_latency_cost += cloud.offload_cost;
      ++cloud_executions;
      completion = now + weights.access_latency_s + weights.core_latency_s +
                   cloud.compute_latency_s;
      record.decision = "cloud";
      record.cloud = true;
      // The cloud serves with full context; log reference accuracy.
      record.accuracy = 100.0;
    } else {
      double load_latency = 0.0;
      if (decision.load_required) {
        for (const auto& victim : decision.evictions) {
          cache.evict_model(victim);
        }
        load_latency = cache.load_model(server_cfg, profile, now);
        costs.switching_cost += weights.w_switch * load_latency;
        ++model_loads;
      }
      const double exec_time = now + load_latency;
      // Completion timestamps of earlier requests may lie ahead of this
      // request's start (no queueing model); ages clamp at zero inside
      // effective_context.
      const double k_eff = store.effective_context(
          request.model_id, request.task_id, aoc_cfg, exec_time);
      const auto& curve =
          accuracy_table.at({request.model_id, request.task_id});
      const auto edge = request_cost_edge(profile, request.task_id, curve,
                                          k_eff, server_cfg, weights,
                                          options.context_overhead_gamma);
      costs.edge_inference_latency_cost += weights.w_inf * edge.inference_latency_s;
      costs.edge_offloading_latency_cost += weights.w_off * edge.offload_latency_s;
      costs.total_accuracy_cost += weights.w_acc * edge.accuracy_cost;
      cache.touch(request.model_id, exec_time);
      ++edge_executions;
      completion = exec_time + edge.inference_latency_s;

      record.decision = decision.load_required ? "edge_load" : "edge_hit";
      record.load_latency_s = load_latency;
      record.inference_latency_s = edge.inference_latency_s;
      record.k_eff = k_eff;
      record.accuracy = edge.accuracy;
      record.accuracy_cost = edge.accuracy_cost;
    }

    // Example timestamps must be nondecreasing per model; clamp when a
    // short request completes before an earlier long one.
    const double record_time =
        std::max(completion, store.latest_time(request.model_id));
    store.record_example(request.model_id, request.task_id, record_time,
                         aoc_cfg.store_capacity);

    if (options.keep_log) result.log.push_back(std::move(record));
  }

  result.metrics =
      aggregate_metrics(costs, edge_executions, cloud_executions, model_loads);
  return result;
}

void write_request_log(const std::vector<RequestRecord>& log,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open log file for writing: " + path);
  out << "request_id,arrival_time_s,model_id,task_id,decision,load_latency_s,"
         "inference_latency_s,k_eff,accuracy,accuracy_cost,cloud\n";
  char buffer[160];
  for (const auto& r : log) {
    std::snprintf(buffer, sizeof(buffer), "%.6f", r.arrival_time_s);
    out << r.request_id << ',' << buffer << ',' << r.model_id << ','
        << r.task_id << ',' << r.decision << ',';
    std::snprintf(buffer, sizeof(buffer), "%.6f,%.6f,%.6f,%.6f,%.6f",
                  r.load_latency_s, r.inference_latency_s, r.k_eff, r.accuracy,
                  r.accuracy_cost);
    out << buffer << ',' << (r.cloud ? 1 : 0) << "\n";
  }
}

}  // namespace edgeserve::simcost
