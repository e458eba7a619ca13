#include "edgeserve/context.hpp"

#include <algorithm>
#include <cmath>

#include "edgeserve/errors.hpp"

namespace edgeserve::context {

UtilityKind utility_kind_from_string(const std::string& name) {
  if (name == "exponential") return UtilityKind::exponential;
  if (name == "linear") return UtilityKind::linear;
  if (name == "step") return UtilityKind::step;
  throw ConfigError("unknown utility kind '" + name + "'");
}

std::string to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::exponential: return "exponential";
    case UtilityKind::linear: return "linear";
    case UtilityKind::step: return "step";
  }
  return "?";
}

double AoCConfig::relevance_between(const std::string& a,
                                    const std::string& b) const {
  auto row = relevance.find(a);
  if (row != relevance.end()) {
    auto cell = row->second.find(b);
    if (cell != row->second.end()) return cell->second;
  }
  return a == b ? 1.0 : 0.0;
}

double age_utility(const AoCConfig& cfg, double age_s) {
  switch (cfg.utility_kind) {
    case UtilityKind::exponential:
      return std::exp(-cfg.decay_rate * age_s);
    case UtilityKind::linear:
      return std::max(0.0, 1.0 - age_s / cfg.decay_rate);
    case UtilityKind::step:
      return age_s <= cfg.decay_rate ? 1.0 : 0.0;
  }
  return 0.0;
}

void ContextStore::record_example(const std::string& model_id,
                                  const std::string& task_id, double now_s,
                                  std::size_t capacity) {
  auto& examples = store_[model_id];
  if (!examples.empty() && now_s < examples.back().created_at_s) {
    throw TimeError("example time regresses for model '" + model_id + "'");
  }
  examples.push_back({now_s, task_id});
  while (examples.size() > capacity) {
    examples.pop_front();
  }
}

const std::deque<DemonstrationExample>& ContextStore::examples(
    const std::string& model_id) const {
  static const std::deque<DemonstrationExample> empty;
  auto it = store_.find(model_id);
  return it == store_.end() ? empty : it->second;
}

double ContextStore::effective_context(const std::string& model_id,
                                       const std::string& task_id,
                                       const AoCConfig& cfg,
                                       double now_s) const {
  double total = 0.0;
  for (const auto& example : examples(model_id)) {
    const double age = std::max(0.0, now_s - example.created_at_s);
    total += age_utility(cfg, age) * cfg.relevance_between(example.task_id, task_id);
  }
  return total;
}

double ContextStore::context_mass(const std::string& model_id,
                                  const AoCConfig& cfg, double now_s) const {
  double total = 0.0;
  for (const auto& example : examples(model_id)) {
    total += age_utility(cfg, std::max(0.0, now_s - example.created_at_s));
  }
  return total;
}

double ContextStore::latest_time(const std::string& model_id) const {
  const auto& examples = this->examples(model_id);
  return examples.empty() ? 0.0 : examples.back().created_at_s;
}

}  // namespace edgeserve::context
