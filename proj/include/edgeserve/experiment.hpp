#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgeserve/catalog.hpp"
#include "edgeserve/context.hpp"
#include "edgeserve/edgecache.hpp"
#include "edgeserve/policy.hpp"
#include "edgeserve/simcost.hpp"
#include "edgeserve/workload.hpp"

namespace edgeserve::experiment {

/// A full experiment: catalog, workload source, server, AoC and cost-model
/// parameters, the policies to run and the replication seeds.
struct ExperimentConfig {
  catalog::Catalog models;
  std::optional<workload::WorkloadConfig> workload_cfg;  // inline workload
  std::optional<std::string> trace_path;                 // or a recorded trace
  edgecache::EdgeServerConfig server;
  context::AoCConfig aoc;
  simcost::CostWeights weights;
  std::vector<policy::PolicyKind> policies;
  simcost::SimOptions options;
  std::vector<std::uint64_t> seeds;
};

/// Parses and validates an experiment config file. Error messages carry the
/// JSON path of the offending field (e.g. "workload.arrival_rate_hz").
ExperimentConfig load_experiment(const std::string& path);
ExperimentConfig parse_experiment(const nlohmann::json& doc);

/// Trace for one replication seed: generated for inline workloads, read from
/// disk for recorded ones (the seed then only feeds the random policy).
workload::Trace trace_for_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Seed for the random policy's PRNG, derived from the replication seed so
/// trace and policy draws never share a stream.
std::uint64_t policy_seed_for(std::uint64_t seed);

simcost::RunResult run_one(const ExperimentConfig& cfg,
                           policy::PolicyKind policy, std::uint64_t seed);

struct PolicyResult {
  policy::PolicyKind policy;
  std::vector<simcost::RunMetrics> per_seed;
  simcost::RunMetrics mean;  // componentwise mean over seeds
};

PolicyResult simulate_policy(const ExperimentConfig& cfg,
                             policy::PolicyKind policy);

/// Runs every configured policy over every seed, fanned out over up to
/// max_threads workers (0 = hardware concurrency).
std::vector<PolicyResult> compare_policies(const ExperimentConfig& cfg,
                                           unsigned max_threads = 0);

simcost::RunMetrics mean_metrics(const std::vector<simcost::RunMetrics>& runs);

nlohmann::json metrics_to_json(const simcost::RunMetrics& metrics);
nlohmann::json policy_result_to_json(const PolicyResult& result,
                                     const std::vector<std::uint64_t>& seeds);

/// Write-temp-then-rename.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string comparison_csv(const std::vector<PolicyResult>& results,
                           const std::vector<std::uint64_t>& seeds);

}  // namespace edgeserve::experiment
