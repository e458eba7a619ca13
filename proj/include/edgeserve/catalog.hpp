#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace edgeserve::catalog {

/// Per-task scores of a model, one Table-like row of the model catalog.
/// Scores live on a 0-100 scale. Tasks of vision/multimodal checkpoints may
/// override the model-level size and FLOP count (the published numbers are
/// per task for those families).
struct TaskProfile {
  std::string task_id;
  double zero_shot_score = 0.0;
  std::optional<double> one_shot_score;
  std::optional<double> few_shot_score;
  std::optional<int> few_shot_k;
  std::optional<double> params_millions;        // per-task checkpoint size
  std::optional<double> gflops_per_inference;   // per-task compute

  bool operator==(const TaskProfile&) const = default;
};

/// Static description of a servable pretrained model.
struct ModelProfile {
  std::string id;
  double params_millions = 0.0;
  double gflops_per_inference = 0.0;
  double bytes_per_param = 2.0;
  int context_window = 0;  // 0 = no in-context learning
  std::optional<double> load_bandwidth_bytes_per_s;
  std::vector<TaskProfile> tasks;

  bool operator==(const ModelProfile&) const = default;

  const TaskProfile* find_task(const std::string& task_id) const;
};

using Catalog = std::vector<ModelProfile>;

/// Calibrated accuracy curve: accuracy(k) = a0 + a1_gain * log2(1 + k^alpha),
/// clamped at 100 and at the context window.
struct AccuracyModel {
  double a0 = 0.0;
  double a1_gain = 0.0;
  double alpha = 1.0;
  int k_max = 0;
};

/// Throws InvariantError on any violated field constraint.
void validate(const ModelProfile& profile);
void validate(const Catalog& models);

const ModelProfile& find_model(const Catalog& models, const std::string& id);

/// The six built-in models with published sizes, FLOP counts and scores.
Catalog builtin_catalog();

Catalog load_catalog(const std::string& path);
void write_catalog(const Catalog& models, const std::string& path);

Catalog parse_catalog_json(const nlohmann::json& doc);
nlohmann::json catalog_to_json(const Catalog& models);

/// Whole-model GPU footprint in bytes, rounded up.
std::uint64_t memory_footprint(const ModelProfile& profile);

/// Fits (a0, a1_gain, alpha) so the curve interpolates the task's published
/// zero-/one-/few-shot points. Throws CalibrationError when the few-shot
/// score cannot be reached (e.g. few-shot below one-shot with positive gain).
AccuracyModel calibrate_accuracy(const TaskProfile& task, int k_max);

double accuracy_at(const AccuracyModel& model, double k_eff);

/// Closed-form alpha for a calibrated three-point task; test oracle for the
/// bisection in calibrate_accuracy, also used by the calibrate CLI report.
double closed_form_alpha(double a0, double a1_gain, double few_shot_score,
                         int k_ref);

}  // namespace edgeserve::catalog
