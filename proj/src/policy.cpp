#include "edgeserve/policy.hpp"

#include <algorithm>
#include <limits>

#include "edgeserve/errors.hpp"

namespace edgeserve::policy {

PolicyKind policy_from_string(const std::string& name) {
  if (name == "random") return PolicyKind::random;
  if (name == "cloud") return PolicyKind::cloud_only;
  if (name == "fifo") return PolicyKind::fifo;
  if (name == "lfu") return PolicyKind::lfu;
  if (name == "lc") return PolicyKind::lc;
  throw ConfigError("unknown policy '" + name + "'");
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::random: return "random";
    case PolicyKind::cloud_only: return "cloud";
    case PolicyKind::fifo: return "fifo";
    case PolicyKind::lfu: return "lfu";
    case PolicyKind::lc: return "lc";
  }
  return "?";
}

const std::vector<PolicyKind>& all_policies() {
  static const std::vector<PolicyKind> kAll = {
      PolicyKind::random, PolicyKind::cloud_only, PolicyKind::fifo,
      PolicyKind::lfu, PolicyKind::lc};
  return kAll;
}

namespace {

struct Candidate {
  const edgecache::CachedModelEntry* entry;
  double key;
};

// key asc, then least-recently-used, then id.
bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.key != b.key) return a.key < b.key;
  if (a.entry->last_used_s != b.entry->last_used_s) {
    return a.entry->last_used_s < b.entry->last_used_s;
  }
  return a.entry->model_id < b.entry->model_id;
}

}  // namespace

std::vector<std::string> select_victims(PolicyKind kind,
                                        const edgecache::CacheState& cache,
                                        const context::ContextStore& store,
                                        const context::AoCConfig& aoc_cfg,
                                        std::uint64_t bytes_needed,
                                        double now_s, Xoshiro256& rng) {
  std::vector<Candidate> remaining;
  std::uint64_t total = 0;
  for (const auto& [model_id, entry] : cache.entries()) {
    double key = 0.0;
    switch (kind) {
      case PolicyKind::fifo:
        key = static_cast<double>(entry.fifo_seq);
        break;
      case PolicyKind::lfu:
        key = static_cast<double>(entry.use_count);
        break;
      case PolicyKind::lc:
        key = store.context_mass(model_id, aoc_cfg, now_s);
        break;
      case PolicyKind::random:
      case PolicyKind::cloud_only:
        break;
    }
    remaining.push_back({&entry, key});
    total += entry.footprint_bytes;
  }
  if (total < bytes_needed) {
    throw Infeasible("cached footprints cannot cover requested bytes");
  }

  std::vector<std::string> victims;
  std::uint64_t freed = 0;
  while (freed < bytes_needed) {
    std::size_t pick;
    if (kind == PolicyKind::random) {
      pick = static_cast<std::size_t>(rng.next_below(remaining.size()));
    } else {
      pick = 0;
      for (std::size_t i = 1; i < remaining.size(); ++i) {
        if (candidate_less(remaining[i], remaining[pick])) pick = i;
      }
    }
    freed += remaining[pick].entry->footprint_bytes;
    victims.push_back(remaining[pick].entry->model_id);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return victims;
}

Decision decide(PolicyKind kind, const edgecache::CacheState& cache,
                const context::ContextStore& store,
                const context::AoCConfig& aoc_cfg,
                const edgecache::EdgeServerConfig& server_cfg,
                const catalog::ModelProfile& profile, double now_s,
                Xoshiro256& rng, bool offload_on_miss) {
  Decision decision;
  if (kind == PolicyKind::cloud_only) {
    decision.offload_to_cloud = true;
    return decision;
  }
  if (cache.is_cached(profile.id)) {
    return decision;  // edge hit, nothing to do
  }
  const std::uint64_t footprint = catalog::memory_footprint(profile);
  if (offload_on_miss || footprint > server_cfg.gpu_memory_bytes) {
    decision.offload_to_cloud = true;
    return decision;
  }
  decision.load_required = true;
  const std::uint64_t needed = cache.bytes_to_free(server_cfg, footprint);
  if (needed > 0) {
    decision.evictions =
        select_victims(kind, cache, store, aoc_cfg, needed, now_s, rng);
  }
  return decision;
}

}  // namespace edgeserve::policy
