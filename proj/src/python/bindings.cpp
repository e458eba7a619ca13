#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "edgeserve/catalog.hpp"
#include "edgeserve/context.hpp"
#include "edgeserve/experiment.hpp"
#include "edgeserve/policy.hpp"
#include "edgeserve/simcost.hpp"
#include "edgeserve/workload.hpp"

namespace py = pybind11;
using namespace edgeserve;

namespace {

py::dict metrics_dict(const simcost::RunMetrics& metrics) {
  py::dict out;
  const auto doc = experiment::metrics_to_json(metrics);
  for (const auto& [key, value] : doc.items()) {
    if (value.is_number_unsigned()) {
      out[key.c_str()] = value.get<std::uint64_t>();
    } else {
      out[key.c_str()] = value.get<double>();
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Edge model-cache simulator core";

  py::class_<catalog::TaskProfile>(m, "TaskProfile")
      .def(py::init<>())
      .def_readwrite("task_id", &catalog::TaskProfile::task_id)
      .def_readwrite("zero_shot_score", &catalog::TaskProfile::zero_shot_score)
      .def_readwrite("one_shot_score", &catalog::TaskProfile::one_shot_score)
      .def_readwrite("few_shot_score", &catalog::TaskProfile::few_shot_score)
      .def_readwrite("few_shot_k", &catalog::TaskProfile::few_shot_k);

  py::class_<catalog::ModelProfile>(m, "ModelProfile")
      .def(py::init<>())
      .def_readwrite("id", &catalog::ModelProfile::id)
      .def_readwrite("params_millions", &catalog::ModelProfile::params_millions)
      .def_readwrite("gflops_per_inference",
                     &catalog::ModelProfile::gflops_per_inference)
      .def_readwrite("bytes_per_param", &catalog::ModelProfile::bytes_per_param)
      .def_readwrite("context_window", &catalog::ModelProfile::context_window)
      .def_readwrite("tasks", &catalog::ModelProfile::tasks);

  py::class_<catalog::AccuracyModel>(m, "AccuracyModel")
      .def(py::init<>())
      .def_readonly("a0", &catalog::AccuracyModel::a0)
      .def_readonly("a1_gain", &catalog::AccuracyModel::a1_gain)
      .def_readonly("alpha", &catalog::AccuracyModel::alpha)
      .def_readonly("k_max", &catalog::AccuracyModel::k_max);

  py::class_<workload::Request>(m, "Request")
      .def_readonly("arrival_time_s", &workload::Request::arrival_time_s)
      .def_readonly("request_id", &workload::Request::request_id)
      .def_readonly("model_id", &workload::Request::model_id)
      .def_readonly("task_id", &workload::Request::task_id);

  m.def("builtin_catalog", &catalog::builtin_catalog);
  m.def("load_catalog", &catalog::load_catalog, py::arg("path"));
  m.def("write_catalog", &catalog::write_catalog, py::arg("models"),
        py::arg("path"));
  m.def("memory_footprint", &catalog::memory_footprint, py::arg("profile"));
  m.def("calibrate_accuracy", &catalog::calibrate_accuracy, py::arg("task"),
        py::arg("k_max"));
  m.def("accuracy_at", &catalog::accuracy_at, py::arg("model"),
        py::arg("k_eff"));

  m.def(
      "generate_trace",
      [](std::uint64_t seed, double duration_s, double arrival_rate_hz,
         double zipf_exponent, const std::vector<std::string>& model_ids,
         const std::map<std::string, std::map<std::string, double>>& task_weights,
         const catalog::Catalog& models) {
        workload::WorkloadConfig cfg;
        cfg.seed = seed;
        cfg.duration_s = duration_s;
        cfg.arrival_rate_hz = arrival_rate_hz;
        cfg.zipf_exponent = zipf_exponent;
        cfg.model_ids = model_ids;
        cfg.task_weights = task_weights;
        return workload::generate_trace(cfg, models);
      },
      py::arg("seed"), py::arg("duration_s"), py::arg("arrival_rate_hz"),
      py::arg("zipf_exponent"), py::arg("model_ids"), py::arg("task_weights"),
      py::arg("catalog"));
  m.def("write_trace", &workload::write_trace, py::arg("trace"), py::arg("path"));
  m.def("read_trace", &workload::read_trace, py::arg("path"), py::arg("catalog"));

  m.def(
      "simulate",
      [](const std::string& config_path, const std::string& policy_name,
         std::uint64_t seed) {
        const auto cfg = experiment::load_experiment(config_path);
        const auto result = experiment::run_one(
            cfg, policy::policy_from_string(policy_name), seed);
        return metrics_dict(result.metrics);
      },
      py::arg("config_path"), py::arg("policy"), py::arg("seed"),
      "Run one policy for one seed and return the run metrics.");

  m.def(
      "compare",
      [](const std::string& config_path, unsigned max_threads) {
        const auto cfg = experiment::load_experiment(config_path);
        const auto results = experiment::compare_policies(cfg, max_threads);
        py::dict out;
        for (const auto& result : results) {
          py::dict entry;
          entry["mean"] = metrics_dict(result.mean);
          py::list per_seed;
          for (const auto& metrics : result.per_seed) {
            per_seed.append(metrics_dict(metrics));
          }
          entry["per_seed"] = per_seed;
          out[policy::to_string(result.policy).c_str()] = entry;
        }
        return out;
      },
      py::arg("config_path"), py::arg("max_threads") = 0,
      "Run every configured policy over every seed.");
}
