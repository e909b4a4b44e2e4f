#ifndef CROSSMAP_GRAPH_HPP
#define CROSSMAP_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "crossmap/core.hpp"
#include "crossmap/transform.hpp"
#include "crossmap/validation.hpp"

namespace crossmap {

enum class RelationType { one_to_one, one_to_many, many_to_one, many_to_many };

inline const char* to_string(RelationType t) {
  switch (t) {
    case RelationType::one_to_one: return "one_to_one";
    case RelationType::one_to_many: return "one_to_many";
    case RelationType::many_to_one: return "many_to_one";
    case RelationType::many_to_many: return "many_to_many";
  }
  return "unknown";
}

inline constexpr RelationType kRelationTypes[] = {
    RelationType::one_to_one, RelationType::one_to_many, RelationType::many_to_one,
    RelationType::many_to_many};

/// A maximal weakly connected piece of the bipartite graph. Source and target
/// nodes are distinct even when they share a key (e.g. AUS -> AUS).
struct Component {
  std::vector<Key> sources;
  std::vector<Key> targets;
  std::vector<Edge> edges;
  RelationType relation_type = RelationType::one_to_one;
};

/// Relation type of a connected edge set.
///
/// One edge is one_to_one. Otherwise a component is a star when one node has
/// degree equal to the edge count and every other node has degree 1; the
/// side holding that hub decides between one_to_many and many_to_one.
/// Anything else is many_to_many.
inline RelationType classify(std::span<const Edge> edges) {
  if (edges.size() == 1) return RelationType::one_to_one;
  std::map<Key, std::size_t> out_degree;
  std::map<Key, std::size_t> in_degree;
  for (const Edge& e : edges) {
    ++out_degree[e.from];
    ++in_degree[e.to];
  }
  const std::size_t m = edges.size();
  const auto star = [m](const std::map<Key, std::size_t>& hub_side,
                        const std::map<Key, std::size_t>& leaf_side) {
    if (hub_side.size() != 1 || hub_side.begin()->second != m) return false;
    return std::all_of(leaf_side.begin(), leaf_side.end(),
                       [](const auto& kv) { return kv.second == 1; });
  };
  if (star(out_degree, in_degree)) return RelationType::one_to_many;
  if (star(in_degree, out_degree)) return RelationType::many_to_one;
  return RelationType::many_to_many;
}

inline RelationType classify(const Component& c) { return classify(std::span<const Edge>(c.edges)); }

/// Weakly connected components, ordered by their smallest source key.
inline std::vector<Component> components(const Crossmap& map) {
  const auto& sources = map.sources();
  const auto& targets = map.targets();
  const std::size_t n_src = sources.size();

  std::vector<std::size_t> parent(n_src + targets.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const auto node_of_target = [&](const Key& k) {
    return n_src + static_cast<std::size_t>(
                       std::lower_bound(targets.begin(), targets.end(), k) - targets.begin());
  };

  std::size_t src = 0;
  for (const Edge& e : map.edges()) {
    while (sources[src] != e.from) ++src;  // edges are sorted by source
    const std::size_t a = find(src);
    const std::size_t b = find(node_of_target(e.to));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  // Roots point at the lowest node index in each set, and sources come first,
  // so visiting sources in order yields components by smallest source key.
  std::map<std::size_t, std::size_t> slot_of_root;
  std::vector<Component> out;
  for (std::size_t s = 0; s < n_src; ++s) {
    const std::size_t root = find(s);
    auto [it, inserted] = slot_of_root.emplace(root, out.size());
    if (inserted) out.emplace_back();
    out[it->second].sources.push_back(sources[s]);
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    out[slot_of_root.at(find(n_src + t))].targets.push_back(targets[t]);
  }
  src = 0;
  for (const Edge& e : map.edges()) {
    while (sources[src] != e.from) ++src;
    out[slot_of_root.at(find(src))].edges.push_back(e);
  }
  for (Component& c : out) c.relation_type = classify(c);
  return out;
}

struct TargetSummary {
  Key target;
  std::vector<Key> incoming;  // sorted
};

/// Per-target aggregation summary plus structural totals.
struct CrossmapSummary {
  std::vector<TargetSummary> targets;  // by incoming count desc, then key
  std::size_t edge_count = 0;
  std::size_t source_count = 0;
  std::size_t target_count = 0;
  std::size_t component_count = 0;
  std::map<RelationType, std::size_t> component_type_counts;
  std::size_t fractional_edge_count = 0;
};

inline CrossmapSummary summarize(const Crossmap& map) {
  CrossmapSummary s;
  std::map<Key, std::vector<Key>> incoming;
  for (const Edge& e : map.edges()) {
    incoming[e.to].push_back(e.from);
    if (e.weight != Rational(1)) ++s.fractional_edge_count;
  }
  for (auto& [t, keys] : incoming) {
    std::sort(keys.begin(), keys.end());
    s.targets.push_back({t, std::move(keys)});
  }
  std::stable_sort(s.targets.begin(), s.targets.end(),
                   [](const TargetSummary& a, const TargetSummary& b) {
                     return a.incoming.size() > b.incoming.size();
                   });
  s.edge_count = map.edges().size();
  s.source_count = map.sources().size();
  s.target_count = map.targets().size();
  for (RelationType t : kRelationTypes) s.component_type_counts[t] = 0;
  for (const Component& c : components(map)) {
    ++s.component_type_counts[c.relation_type];
    ++s.component_count;
  }
  return s;
}

/// Structural and data-dependent measures of how much a crossmap imputes.
///
/// potential_split_share is the fraction of sources that split their mass
/// across several targets. realized_split_mass_share is the fraction of a
/// given array's mass that enters such sources (0 for an array with no mass).
struct ImputationMetrics {
  std::map<RelationType, std::size_t> component_type_counts;
  std::size_t fractional_edge_count = 0;
  std::size_t split_source_count = 0;
  Rational potential_split_share;
  std::optional<Rational> realized_split_mass_share;
};

inline ImputationMetrics imputation_metrics(const Crossmap& map) {
  ImputationMetrics m;
  for (RelationType t : kRelationTypes) m.component_type_counts[t] = 0;
  for (const Component& c : components(map)) ++m.component_type_counts[c.relation_type];
  for (const Edge& e : map.edges()) {
    if (e.weight != Rational(1)) ++m.fractional_edge_count;
  }
  for (const Key& s : map.sources()) {
    if (map.outgoing(s).size() > 1) ++m.split_source_count;
  }
  m.potential_split_share = Rational(static_cast<std::int64_t>(m.split_source_count),
                                     static_cast<std::int64_t>(map.sources().size()));
  return m;
}

/// Throws CoverageError if the array is not conformable with the crossmap,
/// ArrayError if it holds missing or negative values.
inline ImputationMetrics imputation_metrics(const Crossmap& map, const SharedMassArray& array) {
  if (auto findings = check_array(array); !findings.empty()) throw ArrayError(std::move(findings));
  if (auto cov = check_coverage(map, array); !cov.conformable) throw CoverageError(std::move(cov));
  ImputationMetrics m = imputation_metrics(map);
  Rational split;
  for (const auto& [k, v] : array.entries()) {
    if (map.outgoing(k).size() > 1) split += *v;
  }
  const Rational total = array.total();
  m.realized_split_mass_share = total.is_zero() ? Rational() : split / total;
  return m;
}

}  // namespace crossmap

#endif  // CROSSMAP_GRAPH_HPP
