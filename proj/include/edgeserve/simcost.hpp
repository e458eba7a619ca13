#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edgeserve/catalog.hpp"
#include "edgeserve/context.hpp"
#include "edgeserve/edgecache.hpp"
#include "edgeserve/policy.hpp"
#include "edgeserve/workload.hpp"

namespace edgeserve::simcost {

struct CostWeights {
  double w_switch = 0.0;  // per second of model-load latency
  double w_acc = 0.0;     // per unit accuracy loss per request
  double w_inf = 0.0;     // per second of edge inference latency
  double w_off = 0.0;     // per second of access/core latency
  double w_cloud = 0.0;   // per cloud-executed request
  double access_latency_s = 0.0;
  double core_latency_s = 0.0;
  double cloud_throughput_gflops = 1.0;
};

struct CostBreakdown {
  double switching_cost = 0.0;
  double total_accuracy_cost = 0.0;
  double edge_inference_latency_cost = 0.0;
  double edge_offloading_latency_cost = 0.0;
  double cloud_cost = 0.0;

  double system_cost() const {
    return switching_cost + total_accuracy_cost + edge_inference_latency_cost +
           edge_offloading_latency_cost + cloud_cost;
  }
};

struct RunMetrics {
  CostBreakdown costs;
  std::uint64_t request_count = 0;
  std::uint64_t edge_executions = 0;
  std::uint64_t cloud_executions = 0;
  std::uint64_t model_loads = 0;
  double average_accuracy_cost = 0.0;  // 0 when no requests
  double edge_execution_ratio = 0.0;   // 0 when no requests
};

struct SimOptions {
  bool offload_on_miss = false;
  double context_overhead_gamma = 0.01;  // latency overhead per context example
  bool keep_log = false;
  std::uint64_t policy_seed = 0;  // PRNG seed for the random policy
};

struct RequestRecord {
  std::uint64_t request_id = 0;
  double arrival_time_s = 0.0;
  std::string model_id;
  std::string task_id;
  std::string decision;  // edge_hit | edge_load | cloud
  double load_latency_s = 0.0;
  double inference_latency_s = 0.0;
  double k_eff = 0.0;
  double accuracy = 0.0;
  double accuracy_cost = 0.0;
  bool cloud = false;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<RequestRecord> log;  // empty unless keep_log
};

struct EdgeRequestCost {
  double inference_latency_s = 0.0;
  double offload_latency_s = 0.0;
  double accuracy = 0.0;
  double accuracy_cost = 0.0;
};

/// Analytic cost of serving one request at the edge with k_eff effective
/// context examples.
EdgeRequestCost request_cost_edge(const catalog::ModelProfile& profile,
                                  const std::string& task_id,
                                  const catalog::AccuracyModel& accuracy_model,
                                  double k_eff,
                                  const edgecache::EdgeServerConfig& server_cfg,
                                  const CostWeights& weights, double gamma);

struct CloudRequestCost {
  double cloud_cost = 0.0;        // w_cloud + w_off * core latency
  double offload_cost = 0.0;      // w_off * access latency
  double compute_latency_s = 0.0;  // reported only, priced inside w_cloud
};

CloudRequestCost request_cost_cloud(const catalog::ModelProfile& profile,
                                    const CostWeights& weights);

RunMetrics aggregate_metrics(const CostBreakdown& costs,
                             std::uint64_t edge_executions,
                             std::uint64_t cloud_executions,
                             std::uint64_t model_loads);

/// Calibrated accuracy curves for every (model, task) pair. Tasks whose
/// few-shot point cannot be fitted fall back to the zero-/one-shot curve.
std::map<std::pair<std::string, std::string>, catalog::AccuracyModel>
build_accuracy_table(const catalog::Catalog& models);

/// Replays a trace against one policy. Deterministic given its inputs.
RunResult run_simulation(const catalog::Catalog& models,
                         const workload::Trace& trace,
                         const edgecache::EdgeServerConfig& server_cfg,
                         const context::AoCConfig& aoc_cfg,
                         const CostWeights& weights,
                         policy::PolicyKind policy_kind,
                         const SimOptions& options);

void write_request_log(const std::vector<RequestRecord>& log,
                       const std::string& path);

}  // namespace edgeserve::simcost
