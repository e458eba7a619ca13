#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <string>

namespace edgeserve::context {

struct DemonstrationExample {
  double created_at_s = 0.0;
  std::string task_id;
};

enum class UtilityKind { exponential, linear, step };

UtilityKind utility_kind_from_string(const std::string& name);
std::string to_string(UtilityKind kind);

/// Age-of-context configuration. decay_rate is interpreted per kind:
/// exponential -> rate in 1/s, linear -> horizon at which utility hits 0,
/// step -> cutoff age.
struct AoCConfig {
  UtilityKind utility_kind = UtilityKind::exponential;
  double decay_rate = 0.01;
  // Missing entries default to 1 on the diagonal, 0 off it.
  std::map<std::string, std::map<std::string, double>> relevance;
  std::size_t store_capacity = 256;

  double relevance_between(const std::string& a, const std::string& b) const;
};

/// Per-model history of demonstration examples. Keyed by model id; survives
/// cache eviction (the serving layer keeps conversation history even while
/// the model itself is not resident).
class ContextStore {
 public:
  void record_example(const std::string& model_id, const std::string& task_id,
                      double now_s, std::size_t capacity);

  const std::deque<DemonstrationExample>& examples(
      const std::string& model_id) const;

  /// AoC-weighted effective context count for serving task_id on model_id.
  double effective_context(const std::string& model_id,
                           const std::string& task_id, const AoCConfig& cfg,
                           double now_s) const;

  /// Relevance-free context mass: sum of age utilities over the model's
  /// examples. This is the key the least-context eviction policy sorts by.
  double context_mass(const std::string& model_id, const AoCConfig& cfg,
                      double now_s) const;

  double latest_time(const std::string& model_id) const;

 private:
  std::map<std::string, std::deque<DemonstrationExample>> store_;
};

/// Non-increasing age utility, u(0) = 1, u >= 0.
double age_utility(const AoCConfig& cfg, double age_s);

}  // namespace edgeserve::context
