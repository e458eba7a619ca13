#include "edgeserve/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgeserve/errors.hpp"
#include "edgeserve/rng.hpp"

namespace edgeserve::workload {

void validate(const WorkloadConfig& cfg, const catalog::Catalog& models) {
  if (!(cfg.duration_s > 0)) throw ConfigError("duration_s must be > 0");
  if (!(cfg.arrival_rate_hz > 0)) throw ConfigError("arrival_rate_hz must be > 0");
  if (cfg.zipf_exponent < 0) throw ConfigError("zipf_exponent must be >= 0");
  if (cfg.model_ids.empty()) throw ConfigError("model_ids must be nonempty");

  for (const auto& model_id : cfg.model_ids) {
    const auto& model = catalog::find_model(models, model_id);
    auto weights = cfg.task_weights.find(model_id);
    if (weights == cfg.task_weights.end()) {
      throw ConfigError("missing task_weights for model '" + model_id + "'");
    }
    double total = 0.0;
    for (const auto& [task_id, weight] : weights->second) {
      if (model.find_task(task_id) == nullptr) {
        throw ConfigError("model '" + model_id + "' has no task '" + task_id + "'");
      }
      if (weight < 0) throw ConfigError("negative task weight");
      total += weight;
    }
    if (!(total > 0)) {
      throw ConfigError("task weights for model '" + model_id + "' sum to 0");
    }
  }
}

namespace {

// Cumulative categorical sampler over a fixed item list.
class Categorical {
 public:
  Categorical(std::vector<std::string> items, std::vector<double> weights)
      : items_(std::move(items)), cumulative_(weights.size()) {
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      total += weights[i];
      cumulative_[i] = total;
    }
    total_ = total;
  }

  const std::string& draw(Xoshiro256& rng) const {
    const double u = rng.next_double() * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto index = std::min<std::size_t>(it - cumulative_.begin(),
                                             items_.size() - 1);
    return items_[index];
  }

 private:
  std::vector<std::string> items_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace

Trace generate_trace(const WorkloadConfig& cfg, const catalog::Catalog& models) {
  validate(cfg, models);

  std::vector<double> rank_weights(cfg.model_ids.size());
  for (std::size_t r = 0; r < rank_weights.size(); ++r) {
    rank_weights[r] = std::pow(static_cast<double>(r + 1), -cfg.zipf_exponent);
  }
  Categorical model_dist(cfg.model_ids, rank_weights);

  std::map<std::string, Categorical> task_dists;
  for (const auto& model_id : cfg.model_ids) {
    std::vector<std::string> tasks;
    std::vector<double> weights;
    for (const auto& [task_id, weight] : cfg.task_weights.at(model_id)) {
      tasks.push_back(task_id);
      weights.push_back(weight);
    }
    task_dists.emplace(model_id, Categorical(std::move(tasks), std::move(weights)));
  }

  Xoshiro256 rng(cfg.seed);
  Trace trace;
  double now = 0.0;
  std::uint64_t next_id = 0;
  for (;;) {
    const double u = rng.next_double();
    now += -std::log(1.0 - u) / cfg.arrival_rate_hz;
    if (now > cfg.duration_s) break;
    Request request;
    request.arrival_time_s = now;
    request.request_id = next_id++;
    request.model_id = model_dist.draw(rng);
    request.task_id = task_dists.at(request.model_id).draw(rng);
    trace.push_back(std::move(request));
  }
  return trace;
}

static const char kTraceHeader[] = "arrival_time_s,request_id,model_id,task_id";

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trace file for writing: " + path);
  out << kTraceHeader << "\n";
  char buffer[64];
  for (const auto& request : trace) {
    std::snprintf(buffer, sizeof(buffer), "%.6f", request.arrival_time_s);
    out << buffer << ',' << request.request_id << ',' << request.model_id
        << ',' << request.task_id << "\n";
  }
}

Trace read_trace(const std::string& path, const catalog::Catalog& models) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty trace file: " + path);
  if (line != kTraceHeader) {
    throw FormatError("line 1: bad header, expected '" +
                      std::string(kTraceHeader) + "'");
  }

  Trace trace;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string fields[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(row, fields[i], ',')) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": expected 4 columns");
      }
    }
    Request request;
    try {
      request.arrival_time_s = std::stod(fields[0]);
      request.request_id = std::stoull(fields[1]);
    } catch (const std::exception&) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": non-numeric arrival_time_s or request_id");
    }
    request.model_id = fields[2];
    request.task_id = fields[3];

    if (!trace.empty() && request.arrival_time_s < trace.back().arrival_time_s) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": arrival_time_s decreases");
    }
    const catalog::ModelProfile* model = nullptr;
    for (const auto& candidate : models) {
      if (candidate.id == request.model_id) model = &candidate;
    }
    if (model == nullptr) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": unknown model '" + request.model_id + "'");
    }
    if (model->find_task(request.task_id) == nullptr) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": unknown task '" + request.task_id +
                            "' for model '" + request.model_id + "'");
    }
    trace.push_back(std::move(request));
  }
  return trace;
}

}  // namespace edgeserve::workload
