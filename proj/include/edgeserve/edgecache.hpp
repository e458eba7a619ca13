#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edgeserve/catalog.hpp"

namespace edgeserve::edgecache {

struct EdgeServerConfig {
  std::uint64_t gpu_memory_bytes = 0;
  double load_bandwidth_bytes_per_s = 0.0;
  double edge_throughput_gflops = 0.0;
};

struct CachedModelEntry {
  std::string model_id;
  std::uint64_t footprint_bytes = 0;
  double loaded_at_s = 0.0;
  double last_used_s = 0.0;
  std::uint64_t use_count = 0;
  std::uint64_t fifo_seq = 0;
};

/// Loaded-model set with GPU-memory accounting. Binary caching: a model is
/// either fully resident or absent.
class CacheState {
 public:
  bool is_cached(const std::string& model_id) const;

  const CachedModelEntry& entry(const std::string& model_id) const;
  const std::map<std::string, CachedModelEntry>& entries() const {
    return entries_;
  }

  std::uint64_t used_bytes() const { return used_bytes_; }

  /// Bytes that must be evicted before a model of the given footprint fits.
  /// Throws ModelTooLarge when it can never fit.
  std::uint64_t bytes_to_free(const EdgeServerConfig& cfg,
                              std::uint64_t footprint_bytes) const;

  /// Removes the entry and returns its footprint. Throws NotCached.
  std::uint64_t evict_model(const std::string& model_id);

  /// Inserts the model and returns the load latency in seconds. The caller
  /// must have freed enough memory first (bytes_to_free == 0).
  double load_model(const EdgeServerConfig& cfg,
                    const catalog::ModelProfile& profile, double now_s);

  /// Marks an edge execution of a cached model.
  void touch(const std::string& model_id, double now_s);

 private:
  std::map<std::string, CachedModelEntry> entries_;
  std::uint64_t used_bytes_ = 0;
  std::uint64_t next_fifo_seq_ = 0;
};

}  // namespace edgeserve::edgecache
