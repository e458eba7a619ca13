#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgeserve/catalog.hpp"
#include "edgeserve/context.hpp"
#include "edgeserve/edgecache.hpp"
#include "edgeserve/rng.hpp"

namespace edgeserve::policy {

enum class PolicyKind { random, cloud_only, fifo, lfu, lc };

PolicyKind policy_from_string(const std::string& name);
std::string to_string(PolicyKind kind);

/// All five names in the reporting order used by comparison output.
const std::vector<PolicyKind>& all_policies();

struct Decision {
  bool offload_to_cloud = false;
  bool load_required = false;
  std::vector<std::string> evictions;  // ordered, applied first
};

/// Greedy victim selection until freed bytes cover bytes_needed.
/// Keys: fifo -> load order; lfu -> use count; lc -> context mass;
/// random -> seeded uniform choice. Ties (lfu/lc) break by least-recent
/// last_used_s, then lexicographic model id.
std::vector<std::string> select_victims(PolicyKind kind,
                                        const edgecache::CacheState& cache,
                                        const context::ContextStore& store,
                                        const context::AoCConfig& aoc_cfg,
                                        std::uint64_t bytes_needed,
                                        double now_s, Xoshiro256& rng);

/// One cache decision for an incoming request. Infeasibility (model larger
/// than the whole GPU) degrades to cloud offload, never an error.
Decision decide(PolicyKind kind, const edgecache::CacheState& cache,
                const context::ContextStore& store,
                const context::AoCConfig& aoc_cfg,
                const edgecache::EdgeServerConfig& server_cfg,
                const catalog::ModelProfile& profile, double now_s,
                Xoshiro256& rng, bool offload_on_miss = false);

}  // namespace edgeserve::policy
