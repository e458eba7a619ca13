#include "edgeserve/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "edgeserve/errors.hpp"

namespace edgeserve::catalog {

using nlohmann::json;

const TaskProfile* ModelProfile::find_task(const std::string& task_id) const {
  for (const auto& task : tasks) {
    if (task.task_id == task_id) return &task;
  }
  return nullptr;
}

void validate(const ModelProfile& profile) {
  auto fail = [&](const std::string& what) {
    throw InvariantError("model '" + profile.id + "': " + what);
  };
  if (profile.id.empty()) fail("empty id");
  if (!(profile.params_millions > 0)) fail("params_millions must be > 0");
  if (!(profile.gflops_per_inference > 0)) {
    fail("gflops_per_inference must be > 0");
  }
  if (!(profile.bytes_per_param > 0)) fail("bytes_per_param must be > 0");
  if (profile.context_window < 0) fail("context_window must be >= 0");
  if (profile.load_bandwidth_bytes_per_s &&
      !(*profile.load_bandwidth_bytes_per_s > 0)) {
    fail("load_bandwidth_bytes_per_s must be > 0");
  }
  if (profile.tasks.empty()) fail("tasks must be nonempty");

  std::set<std::string> seen;
  for (const auto& task : profile.tasks) {
    if (!seen.insert(task.task_id).second) {
      fail("duplicate task id '" + task.task_id + "'");
    }
    auto check_score = [&](const char* name, double value) {
      if (value < 0 || value > 100) {
        fail("task '" + task.task_id + "': " + name + " outside [0, 100]");
      }
    };
    check_score("zero_shot_score", task.zero_shot_score);
    if (task.one_shot_score) check_score("one_shot_score", *task.one_shot_score);
    if (task.few_shot_score) check_score("few_shot_score", *task.few_shot_score);
    if (task.few_shot_score) {
      if (!task.one_shot_score) {
        fail("task '" + task.task_id + "': few_shot_score without one_shot_score");
      }
      if (!task.few_shot_k || *task.few_shot_k < 2) {
        fail("task '" + task.task_id + "': few_shot_k must be present and >= 2");
      }
    }
    if (profile.context_window == 0 &&
        (task.one_shot_score || task.few_shot_score)) {
      fail("task '" + task.task_id +
           "': shot scores present but context_window = 0");
    }
    if (task.params_millions && !(*task.params_millions > 0)) {
      fail("task '" + task.task_id + "': params_millions must be > 0");
    }
    if (task.gflops_per_inference && !(*task.gflops_per_inference > 0)) {
      fail("task '" + task.task_id + "': gflops_per_inference must be > 0");
    }
  }
}

void validate(const Catalog& models) {
  std::set<std::string> ids;
  for (const auto& model : models) {
    validate(model);
    if (!ids.insert(model.id).second) {
      throw SchemaError("duplicate model id '" + model.id + "'");
    }
  }
}

const ModelProfile& find_model(const Catalog& models, const std::string& id) {
  for (const auto& model : models) {
    if (model.id == id) return model;
  }
  throw ConfigError("unknown model id '" + id + "'");
}

namespace {

TaskProfile lfm_task(std::string id, double zero, double one, double few,
                     int k_ref) {
  TaskProfile t;
  t.task_id = std::move(id);
  t.zero_shot_score = zero;
  t.one_shot_score = one;
  t.few_shot_score = few;
  t.few_shot_k = k_ref;
  return t;
}

TaskProfile zero_shot_task(std::string id, double zero,
                           std::optional<double> params = std::nullopt,
                           std::optional<double> gflops = std::nullopt) {
  TaskProfile t;
  t.task_id = std::move(id);
  t.zero_shot_score = zero;
  t.params_millions = params;
  t.gflops_per_inference = gflops;
  return t;
}

}  // namespace

Catalog builtin_catalog() {
  Catalog models;

  {
    ModelProfile m;
    m.id = "gpt3-13b";
    m.params_millions = 12850;
    m.gflops_per_inference = 26.54;
    m.context_window = 64;
    m.tasks = {
        lfm_task("translation", 15.45, 26.12, 30.83, 64),
        // Published few-shot (14.34) is below one-shot; kept as-is and
        // reported as non-calibratable by the calibration pass.
        lfm_task("basic-arithmetic", 3.79, 15.98, 14.34, 50),
        lfm_task("superglue", 54.4, 64.3, 66.9, 32),
    };
    models.push_back(std::move(m));
  }
  {
    ModelProfile m;
    m.id = "gpt3-175b";
    m.params_millions = 174600;
    m.gflops_per_inference = 354.03;
    m.context_window = 64;
    m.tasks = {
        lfm_task("translation", 22.03, 29.63, 33.77, 64),
        lfm_task("basic-arithmetic", 25.99, 40.71, 49.55, 50),
        lfm_task("superglue", 58.2, 68.9, 73.2, 32),
    };
    models.push_back(std::move(m));
  }
  {
    // UniFormer checkpoints differ per task; model-level size covers the
    // largest variant so a resident model can serve any of its tasks.
    ModelProfile m;
    m.id = "uniformer-s";
    m.params_millions = 41;
    m.gflops_per_inference = 269;
    m.tasks = {
        zero_shot_task("image-classification", 82.9, 22, 3.6),
        zero_shot_task("video-classification", 82.8, 22, 167),
        zero_shot_task("object-detection", 45.6, 41, 269),
        zero_shot_task("semantic-segmentation", 46.6, 25, 247),
        zero_shot_task("pose-estimation", 74.0, 25, 4.7),
    };
    models.push_back(std::move(m));
  }
  {
    ModelProfile m;
    m.id = "uniformer-b";
    m.params_millions = 69;
    m.gflops_per_inference = 471;
    m.tasks = {
        zero_shot_task("image-classification", 83.9, 50, 8.3),
        zero_shot_task("video-classification", 84.0, 22, 389),
        zero_shot_task("object-detection", 47.4, 69, 399),
        zero_shot_task("semantic-segmentation", 48.0, 54, 471),
        zero_shot_task("pose-estimation", 75.0, 54, 9.2),
    };
    models.push_back(std::move(m));
  }
  {
    ModelProfile m;
    m.id = "clip-vit-l14";
    m.params_millions = 428;
    m.gflops_per_inference = 175.5;
    m.tasks = {
        zero_shot_task("classification", 75.20),
        zero_shot_task("image-retrieval", 71.08),
        zero_shot_task("text-retrieval", 84.00),
    };
    models.push_back(std::move(m));
  }
  {
    ModelProfile m;
    m.id = "clip-vit-h14";
    m.params_millions = 986;
    m.gflops_per_inference = 381.9;
    m.tasks = {
        zero_shot_task("classification", 77.97),
        zero_shot_task("image-retrieval", 73.43),
        zero_shot_task("text-retrieval", 86.04),
    };
    models.push_back(std::move(m));
  }

  validate(models);
  return models;
}

namespace {

double require_number(const json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key)) {
    throw SchemaError("missing field " + path + "." + key);
  }
  if (!obj.at(key).is_number()) {
    throw SchemaError("field " + path + "." + key + " must be a number");
  }
  return obj.at(key).get<double>();
}

std::string require_string(const json& obj, const std::string& key,
                           const std::string& path) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw SchemaError("missing or ill-typed field " + path + "." + key);
  }
  return obj.at(key).get<std::string>();
}

std::optional<double> optional_number(const json& obj, const std::string& key,
                                      const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj.at(key).is_number()) {
    throw SchemaError("field " + path + "." + key + " must be a number");
  }
  return obj.at(key).get<double>();
}

TaskProfile parse_task(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + " must be an object");
  TaskProfile t;
  t.task_id = require_string(obj, "task_id", path);
  t.zero_shot_score = require_number(obj, "zero_shot_score", path);
  t.one_shot_score = optional_number(obj, "one_shot_score", path);
  t.few_shot_score = optional_number(obj, "few_shot_score", path);
  if (auto k = optional_number(obj, "few_shot_k", path)) {
    t.few_shot_k = static_cast<int>(*k);
  }
  t.params_millions = optional_number(obj, "params_millions", path);
  t.gflops_per_inference = optional_number(obj, "gflops_per_inference", path);
  return t;
}

ModelProfile parse_model(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + " must be an object");
  ModelProfile m;
  m.id = require_string(obj, "id", path);
  m.params_millions = require_number(obj, "params_millions", path);
  m.gflops_per_inference = require_number(obj, "gflops_per_inference", path);
  m.bytes_per_param = require_number(obj, "bytes_per_param", path);
  m.context_window =
      static_cast<int>(require_number(obj, "context_window", path));
  m.load_bandwidth_bytes_per_s =
      optional_number(obj, "load_bandwidth_bytes_per_s", path);
  if (!obj.contains("tasks") || !obj.at("tasks").is_array()) {
    throw SchemaError("missing or ill-typed field " + path + ".tasks");
  }
  int i = 0;
  for (const auto& task : obj.at("tasks")) {
    m.tasks.push_back(parse_task(task, path + ".tasks[" + std::to_string(i) + "]"));
    ++i;
  }
  return m;
}

}  // namespace

Catalog parse_catalog_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("models") ||
      !doc.at("models").is_array()) {
    throw SchemaError("catalog must be an object with a \"models\" array");
  }
  Catalog models;
  int i = 0;
  for (const auto& entry : doc.at("models")) {
    models.push_back(parse_model(entry, "models[" + std::to_string(i) + "]"));
    ++i;
  }
  validate(models);
  return models;
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
  return parse_catalog_json(doc);
}

json catalog_to_json(const Catalog& models) {
  json out;
  out["models"] = json::array();
  for (const auto& m : models) {
    json jm;
    jm["id"] = m.id;
    jm["params_millions"] = m.params_millions;
    jm["gflops_per_inference"] = m.gflops_per_inference;
    jm["bytes_per_param"] = m.bytes_per_param;
    jm["context_window"] = m.context_window;
    if (m.load_bandwidth_bytes_per_s) {
      jm["load_bandwidth_bytes_per_s"] = *m.load_bandwidth_bytes_per_s;
    }
    jm["tasks"] = json::array();
    for (const auto& t : m.tasks) {
      json jt;
      jt["task_id"] = t.task_id;
      jt["zero_shot_score"] = t.zero_shot_score;
      if (t.one_shot_score) jt["one_shot_score"] = *t.one_shot_score;
      if (t.few_shot_score) jt["few_shot_score"] = *t.few_shot_score;
      if (t.few_shot_k) jt["few_shot_k"] = *t.few_shot_k;
      if (t.params_millions) jt["params_millions"] = *t.params_millions;
      if (t.gflops_per_inference) {
        jt["gflops_per_inference"] = *t.gflops_per_inference;
      }
      jm["tasks"].push_back(std::move(jt));
    }
    out["models"].push_back(std::move(jm));
  }
  return out;
}

void write_catalog(const Catalog& models, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open catalog file for writing: " + path);
  out << catalog_to_json(models).dump(2) << "\n";
}

std::uint64_t memory_footprint(const ModelProfile& profile) {
  const double bytes = profile.params_millions * 1e6 * profile.bytes_per_param;
  return static_cast<std::uint64_t>(std::ceil(bytes));
}

namespace {

double curve(double a0, double gain, double alpha, double k) {
  return a0 + gain * std::log2(1.0 + std::pow(k, alpha));
}

}  // namespace

AccuracyModel calibrate_accuracy(const TaskProfile& task, int k_max) {
  AccuracyModel model;
  model.a0 = task.zero_shot_score;
  model.k_max = k_max;
  if (!task.one_shot_score) {
    return model;  // constant at a0
  }
  model.a1_gain = std::max(0.0, *task.one_shot_score - task.zero_shot_score);
  if (!task.few_shot_score) {
    return model;
  }

  const double target = *task.few_shot_score;
  const int k_ref = *task.few_shot_k;
  if (model.a1_gain == 0.0) {
    if (target == model.a0) return model;
    throw CalibrationError("task '" + task.task_id +
                           "': zero gain cannot reach few-shot score");
  }

  double lo = 1e-6;
  double hi = 10.0;
  const double f_lo = curve(model.a0, model.a1_gain, lo, k_ref) - target;
  const double f_hi = curve(model.a0, model.a1_gain, hi, k_ref) - target;
  if (f_lo * f_hi > 0) {
    throw CalibrationError(
        "task '" + task.task_id +
        "': few-shot score not bracketed by alpha in (1e-6, 10)");
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = curve(model.a0, model.a1_gain, mid, k_ref) - target;
    if (f_lo * f_mid <= 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  model.alpha = 0.5 * (lo + hi);
  return model;
}

double accuracy_at(const AccuracyModel& model, double k_eff) {
  const double k = std::min(k_eff, static_cast<double>(model.k_max));
  return std::min(100.0, curve(model.a0, model.a1_gain, model.alpha, k));
}

double closed_form_alpha(double a0, double a1_gain, double few_shot_score,
                         int k_ref) {
  const double ratio = (few_shot_score - a0) / a1_gain;
  return std::log(std::exp2(ratio) - 1.0) / std::log(static_cast<double>(k_ref));
}

}  // namespace edgeserve::catalog
