#include "edgeserve/edgecache.hpp"

#include "edgeserve/errors.hpp"

namespace edgeserve::edgecache {

bool CacheState::is_cached(const std::string& model_id) const {
  return entries_.contains(model_id);
}

const CachedModelEntry& CacheState::entry(const std::string& model_id) const {
  auto it = entries_.find(model_id);
  if (it == entries_.end()) {
    throw NotCached("model '" + model_id + "' is not cached");
  }
  return it->second;
}

std::uint64_t CacheState::bytes_to_free(const EdgeServerConfig& cfg,
                                        std::uint64_t footprint_bytes) const {
  if (footprint_bytes > cfg.gpu_memory_bytes) {
    throw ModelTooLarge("footprint exceeds GPU memory capacity");
  }
  const std::uint64_t needed = used_bytes_ + footprint_bytes;
  return needed > cfg.gpu_memory_bytes ? needed - cfg.gpu_memory_bytes : 0;
}

std::uint64_t CacheState::evict_model(const std::string& model_id) {
  auto it = entries_.find(model_id);
  if (it == entries_.end()) {
    throw NotCached("cannot evict '" + model_id + "': not cached");
  }
  const std::uint64_t freed = it->second.footprint_bytes;
  used_bytes_ -= freed;
  entries_.erase(it);
  return freed;
}

double CacheState::load_model(const EdgeServerConfig& cfg,
                              const catalog::ModelProfile& profile,
                              double now_s) {
  if (entries_.contains(profile.id)) {
    throw AlreadyCached("model '" + profile.id + "' already cached");
  }
  const std::uint64_t footprint = catalog::memory_footprint(profile);
  if (bytes_to_free(cfg, footprint) > 0) {
    throw InsufficientMemory("not enough free GPU memory to load '" +
                             profile.id + "'");
  }
  const double bandwidth = profile.load_bandwidth_bytes_per_s
                               ? *profile.load_bandwidth_bytes_per_s
                               : cfg.load_bandwidth_bytes_per_s;
  const double latency = static_cast<double>(footprint) / bandwidth;

  CachedModelEntry entry;
  entry.model_id = profile.id;
  entry.footprint_bytes = footprint;
  entry.loaded_at_s = now_s + latency;
  entry.last_used_s = entry.loaded_at_s;
  entry.use_count = 0;
  entry.fifo_seq = next_fifo_seq_++;
  used_bytes_ += footprint;
  entries_.emplace(profile.id, std::move(entry));
  return latency;
}

void CacheState::touch(const std::string& model_id, double now_s) {
  auto it = entries_.find(model_id);
  if (it == entries_.end()) {
    throw NotCached("cannot touch '" + model_id + "': not cached");
  }
  it->second.use_count += 1;
  it->second.last_used_s = now_s;
}

}  // namespace edgeserve::edgecache
