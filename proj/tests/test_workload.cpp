#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "edgeserve/errors.hpp"
#include "edgeserve/rng.hpp"
#include "edgeserve/workload.hpp"

using namespace edgeserve;
using workload::Request;
using workload::Trace;
using workload::WorkloadConfig;

namespace {

catalog::Catalog two_model_catalog() {
  catalog::Catalog models;
  for (const auto* id : {"model-a", "model-b"}) {
    catalog::ModelProfile m;
    m.id = id;
    m.params_millions = 1;
    m.gflops_per_inference = 1;
    catalog::TaskProfile t;
    t.task_id = "task";
    t.zero_shot_score = 50;
    m.tasks = {t};
    models.push_back(std::move(m));
  }
  return models;
}

WorkloadConfig two_model_config(double rate, double duration, double zipf) {
  WorkloadConfig cfg;
  cfg.seed = 20240611;
  cfg.duration_s = duration;
  cfg.arrival_rate_hz = rate;
  cfg.zipf_exponent = zipf;
  cfg.model_ids = {"model-a", "model-b"};
  cfg.task_weights = {{"model-a", {{"task", 1.0}}}, {"model-b", {{"task", 1.0}}}};
  return cfg;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("trace generation is deterministic, monotone and consecutively numbered") {
  const auto models = two_model_catalog();
  const auto cfg = two_model_config(5.0, 200.0, 0.7);
  const auto trace = workload::generate_trace(cfg, models);
  const auto again = workload::generate_trace(cfg, models);
  CHECK(trace == again);
  REQUIRE(!trace.empty());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(trace[i].request_id == i);
    CHECK(trace[i].arrival_time_s <= cfg.duration_s);
    if (i > 0) CHECK(trace[i].arrival_time_s >= trace[i - 1].arrival_time_s);
  }
}

TEST_CASE("poisson request count stays within three sigma") {
  const auto models = two_model_catalog();
  const auto trace = workload::generate_trace(two_model_config(10.0, 1000.0, 0.0), models);
  const double mean = 10.0 * 1000.0;
  const double sigma = std::sqrt(mean);
  CHECK(std::abs(static_cast<double>(trace.size()) - mean) <= 3 * sigma);
}

TEST_CASE("zipf exponent zero gives uniform popularity") {
  const auto models = two_model_catalog();
  const auto trace = workload::generate_trace(two_model_config(100.0, 1000.0, 0.0), models);
  REQUIRE(trace.size() > 50'000);
  std::size_t a = 0;
  for (const auto& request : trace) a += request.model_id == "model-a";
  const double share = static_cast<double>(a) / trace.size();
  CHECK(share == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("zipf(1) two-model ratio approaches 2, matching a categorical oracle") {
  const auto models = two_model_catalog();
  const auto trace = workload::generate_trace(two_model_config(100.0, 1000.0, 1.0), models);
  REQUIRE(trace.size() > 50'000);
  std::size_t a = 0;
  for (const auto& request : trace) a += request.model_id == "model-a";
  const double ratio = static_cast<double>(a) / static_cast<double>(trace.size() - a);
  CHECK(std::abs(ratio - 2.0) <= 0.05);

  // independent inverse-CDF oracle over the same probabilities (2/3, 1/3)
  Xoshiro256 rng(777);
  std::size_t oracle_a = 0;
  const std::size_t draws = 100'000;
  for (std::size_t i = 0; i < draws; ++i) {
    oracle_a += rng.next_double() < 2.0 / 3.0;
  }
  const double oracle_ratio =
      static_cast<double>(oracle_a) / static_cast<double>(draws - oracle_a);
  CHECK(std::abs(oracle_ratio - 2.0) <= 0.05);
}

TEST_CASE("trace config validation") {
  const auto models = two_model_catalog();
  auto cfg = two_model_config(1.0, 10.0, 0.0);

  SUBCASE("unknown model id") {
    cfg.model_ids.push_back("missing");
    CHECK_THROWS_AS(workload::generate_trace(cfg, models), ConfigError);
  }
  SUBCASE("unknown task id") {
    cfg.task_weights["model-a"] = {{"nope", 1.0}};
    CHECK_THROWS_AS(workload::generate_trace(cfg, models), ConfigError);
  }
  SUBCASE("all-zero task weights") {
    cfg.task_weights["model-a"] = {{"task", 0.0}};
    CHECK_THROWS_AS(workload::generate_trace(cfg, models), ConfigError);
  }
}

TEST_CASE("trace CSV round-trip") {
  const auto models = two_model_catalog();
  const auto path = temp_file("edgeserve_trace_roundtrip.csv");

  SUBCASE("empty trace writes only the header") {
    workload::write_trace({}, path.string());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "arrival_time_s,request_id,model_id,task_id");
    CHECK_FALSE(std::getline(in, line));
    CHECK(workload::read_trace(path.string(), models).empty());
  }
  SUBCASE("three requests round-trip exactly") {
    Trace trace = {
        {0.125, 0, "model-a", "task"},
        {1.5, 1, "model-b", "task"},
        {1.5, 2, "model-a", "task"},
    };
    workload::write_trace(trace, path.string());
    CHECK(workload::read_trace(path.string(), models) == trace);
  }
  SUBCASE("generated trace round-trips") {
    const auto trace =
        workload::generate_trace(two_model_config(3.0, 100.0, 0.5), models);
    workload::write_trace(trace, path.string());
    const auto reread = workload::read_trace(path.string(), models);
    REQUIRE(reread.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      CHECK(reread[i].model_id == trace[i].model_id);
      CHECK(reread[i].task_id == trace[i].task_id);
      CHECK(reread[i].arrival_time_s ==
            doctest::Approx(trace[i].arrival_time_s).epsilon(1e-6));
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("trace reading rejects malformed files") {
  const auto models = two_model_catalog();
  const auto path = temp_file("edgeserve_trace_bad.csv");

  SUBCASE("decreasing time names the line") {
    std::ofstream(path) << "arrival_time_s,request_id,model_id,task_id\n"
                           "1.000000,0,model-a,task\n"
                           "0.500000,1,model-a,task\n";
    CHECK_THROWS_WITH_AS(workload::read_trace(path.string(), models),
                         doctest::Contains("line 3"), ValidationError);
  }
  SUBCASE("unknown model id") {
    std::ofstream(path) << "arrival_time_s,request_id,model_id,task_id\n"
                           "1.000000,0,ghost,task\n";
    CHECK_THROWS_AS(workload::read_trace(path.string(), models), ValidationError);
  }
  SUBCASE("bad header") {
    std::ofstream(path) << "time,id\n";
    CHECK_THROWS_AS(workload::read_trace(path.string(), models), FormatError);
  }
  SUBCASE("missing column") {
    std::ofstream(path) << "arrival_time_s,request_id,model_id,task_id\n"
                           "1.000000,0,model-a\n";
    CHECK_THROWS_WITH_AS(workload::read_trace(path.string(), models),
                         doctest::Contains("line 2"), FormatError);
  }
  std::filesystem::remove(path);
}
