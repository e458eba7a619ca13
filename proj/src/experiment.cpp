#include "edgeserve/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "edgeserve/errors.hpp"
#include "edgeserve/rng.hpp"

namespace edgeserve::experiment {

using nlohmann::json;

namespace {

double require_number(const json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key)) {
    throw ConfigError("missing field " + path + "." + key);
  }
  if (!obj.at(key).is_number()) {
    throw ConfigError("field " + path + "." + key + " must be a number");
  }
  return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<double>();
}

context::AoCConfig parse_aoc(const json& obj) {
  context::AoCConfig cfg;
  if (obj.contains("utility_kind")) {
    cfg.utility_kind =
        context::utility_kind_from_string(obj.at("utility_kind").get<std::string>());
  }
  cfg.decay_rate = number_or(obj, "decay_rate", cfg.decay_rate);
  if (!(cfg.decay_rate > 0)) {
    throw ConfigError("field aoc.decay_rate must be > 0");
  }
  cfg.store_capacity = static_cast<std::size_t>(
      number_or(obj, "store_capacity", static_cast<double>(cfg.store_capacity)));
  if (obj.contains("relevance")) {
    for (const auto& [row_task, row] : obj.at("relevance").items()) {
      for (const auto& [col_task, weight] : row.items()) {
        const double w = weight.get<double>();
        if (w < 0 || w > 1) {
          throw ConfigError("field aoc.relevance entries must lie in [0, 1]");
        }
        cfg.relevance[row_task][col_task] = w;
        cfg.relevance[col_task][row_task] = w;  // kept symmetric
      }
    }
  }
  return cfg;
}

workload::WorkloadConfig parse_workload(const json& obj) {
  workload::WorkloadConfig cfg;
  cfg.duration_s = require_number(obj, "duration_s", "workload");
  cfg.arrival_rate_hz = require_number(obj, "arrival_rate_hz", "workload");
  cfg.zipf_exponent = number_or(obj, "zipf_exponent", 0.0);
  if (!obj.contains("model_ids") || !obj.at("model_ids").is_array()) {
    throw ConfigError("missing field workload.model_ids");
  }
  for (const auto& id : obj.at("model_ids")) {
    cfg.model_ids.push_back(id.get<std::string>());
  }
  if (obj.contains("task_weights")) {
    for (const auto& [model_id, tasks] : obj.at("task_weights").items()) {
      for (const auto& [task_id, weight] : tasks.items()) {
        cfg.task_weights[model_id][task_id] = weight.get<double>();
      }
    }
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig cfg;

  if (!doc.contains("catalog")) {
    cfg.models = catalog::builtin_catalog();
  } else if (doc.at("catalog").is_string()) {
    const auto spec = doc.at("catalog").get<std::string>();
    cfg.models =
        spec == "builtin" ? catalog::builtin_catalog() : catalog::load_catalog(spec);
  } else {
    cfg.models = catalog::parse_catalog_json(doc.at("catalog"));
  }

  if (!doc.contains("workload")) throw ConfigError("missing field workload");
  const auto& wl = doc.at("workload");
  if (wl.contains("trace")) {
    cfg.trace_path = wl.at("trace").get<std::string>();
  } else {
    cfg.workload_cfg = parse_workload(wl);
  }

  if (!doc.contains("server")) throw ConfigError("missing field server");
  const auto& server = doc.at("server");
  cfg.server.gpu_memory_bytes = static_cast<std::uint64_t>(
      require_number(server, "gpu_memory_bytes", "server"));
  cfg.server.load_bandwidth_bytes_per_s =
      require_number(server, "load_bandwidth_bytes_per_s", "server");
  cfg.server.edge_throughput_gflops =
      require_number(server, "edge_throughput_gflops", "server");
  if (cfg.server.gpu_memory_bytes == 0 ||
      !(cfg.server.load_bandwidth_bytes_per_s > 0) ||
      !(cfg.server.edge_throughput_gflops > 0)) {
    throw ConfigError("server fields must be positive");
  }

  cfg.aoc = doc.contains("aoc") ? parse_aoc(doc.at("aoc")) : context::AoCConfig{};

  if (doc.contains("weights")) {
    const auto& w = doc.at("weights");
    cfg.weights.w_switch = number_or(w, "w_switch", 0.0);
    cfg.weights.w_acc = number_or(w, "w_acc", 0.0);
    cfg.weights.w_inf = number_or(w, "w_inf", 0.0);
    cfg.weights.w_off = number_or(w, "w_off", 0.0);
    cfg.weights.w_cloud = number_or(w, "w_cloud", 0.0);
    cfg.weights.access_latency_s = number_or(w, "access_latency_s", 0.0);
    cfg.weights.core_latency_s = number_or(w, "core_latency_s", 0.0);
    cfg.weights.cloud_throughput_gflops =
        number_or(w, "cloud_throughput_gflops", 1.0);
    for (double v : {cfg.weights.w_switch, cfg.weights.w_acc, cfg.weights.w_inf,
                     cfg.weights.w_off, cfg.weights.w_cloud,
                     cfg.weights.access_latency_s, cfg.weights.core_latency_s}) {
      if (v < 0) throw ConfigError("weights must be >= 0");
    }
    if (!(cfg.weights.cloud_throughput_gflops > 0)) {
      throw ConfigError("field weights.cloud_throughput_gflops must be > 0");
    }
  }

  if (doc.contains("policies")) {
    for (const auto& name : doc.at("policies")) {
      cfg.policies.push_back(policy::policy_from_string(name.get<std::string>()));
    }
  } else if (doc.contains("policy")) {
    cfg.policies.push_back(
        policy::policy_from_string(doc.at("policy").get<std::string>()));
  } else {
    cfg.policies = policy::all_policies();
  }

  if (doc.contains("options")) {
    const auto& opts = doc.at("options");
    if (opts.contains("offload_on_miss")) {
      cfg.options.offload_on_miss = opts.at("offload_on_miss").get<bool>();
    }
    cfg.options.context_overhead_gamma =
        number_or(opts, "context_overhead_gamma", cfg.options.context_overhead_gamma);
    if (opts.contains("log")) {
      cfg.options.keep_log = opts.at("log").get<bool>();
    }
  }

  if (doc.contains("seeds")) {
    for (const auto& seed : doc.at("seeds")) {
      cfg.seeds.push_back(seed.get<std::uint64_t>());
    }
  }
  if (cfg.workload_cfg && cfg.seeds.empty()) {
    throw ConfigError("field seeds must be nonempty for generated workloads");
  }
  if (cfg.seeds.empty()) cfg.seeds.push_back(0);

  if (cfg.workload_cfg) {
    workload::validate(*cfg.workload_cfg, cfg.models);
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return parse_experiment(doc);
}

workload::Trace trace_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.trace_path) {
    return workload::read_trace(*cfg.trace_path, cfg.models);
  }
  workload::WorkloadConfig wl = *cfg.workload_cfg;
  wl.seed = seed;
  return workload::generate_trace(wl, cfg.models);
}

std::uint64_t policy_seed_for(std::uint64_t seed) {
  return splitmix64_once(seed ^ 0x5ca1ab1edeadbeefULL);
}

simcost::RunResult run_one(const ExperimentConfig& cfg,
                           policy::PolicyKind policy, std::uint64_t seed) {
  const auto trace = trace_for_seed(cfg, seed);
  simcost::SimOptions options = cfg.options;
  options.policy_seed = policy_seed_for(seed);
  return simcost::run_simulation(cfg.models, trace, cfg.server, cfg.aoc,
                                 cfg.weights, policy, options);
}

simcost::RunMetrics mean_metrics(const std::vector<simcost::RunMetrics>& runs) {
  simcost::RunMetrics mean;
  if (runs.empty()) return mean;
  const double n = static_cast<double>(runs.size());
  double acc_ratio = 0.0;
  double acc_avg_cost = 0.0;
  for (const auto& run : runs) {
    mean.costs.switching_cost += run.costs.switching_cost / n;
    mean.costs.total_accuracy_cost += run.costs.total_accuracy_cost / n;
    mean.costs.edge_inference_latency_cost +=
        run.costs.edge_inference_latency_cost / n;
    mean.costs.edge_offloading_latency_cost +=
        run.costs.edge_offloading_latency_cost / n;
    mean.costs.cloud_cost += run.costs.cloud_cost / n;
    mean.request_count += run.request_count;
    mean.edge_executions += run.edge_executions;
    mean.cloud_executions += run.cloud_executions;
    mean.model_loads += run.model_loads;
    acc_ratio += run.edge_execution_ratio / n;
    acc_avg_cost += run.average_accuracy_cost / n;
  }
  mean.edge_execution_ratio = acc_ratio;
  mean.average_accuracy_cost = acc_avg_cost;
  return mean;
}

PolicyResult simulate_policy(const ExperimentConfig& cfg,
                             policy::PolicyKind policy) {
  PolicyResult result;
  result.policy = policy;
  for (const auto seed : cfg.seeds) {
    result.per_seed.push_back(run_one(cfg, policy, seed).metrics);
  }
  result.mean = mean_metrics(result.per_seed);
  return result;
}

std::vector<PolicyResult> compare_policies(const ExperimentConfig& cfg,
                                           unsigned max_threads) {
  struct Task {
    std::size_t policy_index;
    std::size_t seed_index;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      tasks.push_back({p, s});
    }
  }

  std::vector<PolicyResult> results(cfg.policies.size());
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    results[p].policy = cfg.policies[p];
    results[p].per_seed.resize(cfg.seeds.size());
  }

  unsigned threads = max_threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto& task = tasks[i];
      results[task.policy_index].per_seed[task.seed_index] =
          run_one(cfg, cfg.policies[task.policy_index], cfg.seeds[task.seed_index])
              .metrics;
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& result : results) {
    result.mean = mean_metrics(result.per_seed);
  }
  return results;
}

json metrics_to_json(const simcost::RunMetrics& metrics) {
  json out;
  out["switching_cost"] = metrics.costs.switching_cost;
  out["total_accuracy_cost"] = metrics.costs.total_accuracy_cost;
  out["edge_inference_latency_cost"] = metrics.costs.edge_inference_latency_cost;
  out["edge_offloading_latency_cost"] =
      metrics.costs.edge_offloading_latency_cost;
  out["cloud_cost"] = metrics.costs.cloud_cost;
  out["system_cost"] = metrics.costs.system_cost();
  out["request_count"] = metrics.request_count;
  out["edge_executions"] = metrics.edge_executions;
  out["cloud_executions"] = metrics.cloud_executions;
  out["model_loads"] = metrics.model_loads;
  out["average_accuracy_cost"] = metrics.average_accuracy_cost;
  out["edge_execution_ratio"] = metrics.edge_execution_ratio;
  return out;
}

json policy_result_to_json(const PolicyResult& result,
                           const std::vector<std::uint64_t>& seeds) {
  json out;
  out["policy"] = policy::to_string(result.policy);
  out["seeds"] = seeds;
  out["per_seed"] = json::array();
  for (const auto& metrics : result.per_seed) {
    out["per_seed"].push_back(metrics_to_json(metrics));
  }
  out["mean"] = metrics_to_json(result.mean);
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + temp);
    out << contents;
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0) {
    throw IoError("cannot rename " + temp + " to " + path);
  }
}

std::string comparison_csv(const std::vector<PolicyResult>& results,
                           const std::vector<std::uint64_t>& seeds) {
  std::ostringstream out;
  out << "policy,seed,system_cost,switching_cost,total_accuracy_cost,"
         "average_accuracy_cost,edge_inference_latency_cost,"
         "edge_offloading_latency_cost,cloud_cost,edge_execution_ratio,"
         "request_count,model_loads\n";
  for (const auto& result : results) {
    for (std::size_t s = 0; s < result.per_seed.size(); ++s) {
      const auto& m = result.per_seed[s];
      out << policy::to_string(result.policy) << ',' << seeds[s] << ','
          << m.costs.system_cost() << ',' << m.costs.switching_cost << ','
          << m.costs.total_accuracy_cost << ',' << m.average_accuracy_cost
          << ',' << m.costs.edge_inference_latency_cost << ','
          << m.costs.edge_offloading_latency_cost << ',' << m.costs.cloud_cost
          << ',' << m.edge_execution_ratio << ',' << m.request_count << ','
          << m.model_loads << "\n";
    }
  }
  return out.str();
}

}  // namespace edgeserve::experiment
