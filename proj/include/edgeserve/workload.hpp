#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edgeserve/catalog.hpp"

namespace edgeserve::workload {

struct WorkloadConfig {
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  double arrival_rate_hz = 0.0;
  double zipf_exponent = 0.0;  // 0 = uniform popularity
  std::vector<std::string> model_ids;  // rank 1 = most popular
  // Per model, categorical weights over its task ids.
  std::map<std::string, std::map<std::string, double>> task_weights;
};

struct Request {
  double arrival_time_s = 0.0;
  std::uint64_t request_id = 0;
  std::string model_id;
  std::string task_id;

  bool operator==(const Request&) const = default;
};

using Trace = std::vector<Request>;

void validate(const WorkloadConfig& cfg, const catalog::Catalog& models);

/// Deterministic trace generation: Poisson arrivals by inverse-CDF
/// exponential gaps, Zipf(s) model popularity over ranks, categorical task
/// choice. Same config and catalog give a bitwise-identical trace.
Trace generate_trace(const WorkloadConfig& cfg, const catalog::Catalog& models);

void write_trace(const Trace& trace, const std::string& path);
Trace read_trace(const std::string& path, const catalog::Catalog& models);

}  // namespace edgeserve::workload
