#ifndef CROSSMAP_TESTS_RANDOM_CROSSMAP_HPP
#define CROSSMAP_TESTS_RANDOM_CROSSMAP_HPP

// Seeded generators for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crossmap/crossmap.hpp"

namespace crossmap::testing {

using Rng = std::mt19937_64;

inline std::vector<Key> make_keys(const std::string& prefix, std::size_t n) {
  std::vector<Key> keys;
  for (std::size_t i = 0; i < n; ++i) keys.emplace_back(prefix + std::to_string(i));
  return keys;
}

/// Positive weights summing to exactly 1: differences between sorted,
/// distinct cut points p/q in (0,1) with q <= max_den.
inline std::vector<Rational> random_partition_of_one(Rng& rng, std::size_t parts,
                                                     std::int64_t max_den = 12) {
  std::set<Rational> cuts;
  std::uniform_int_distribution<std::int64_t> den(2, max_den);
  while (cuts.size() + 1 < parts) {
    const std::int64_t q = den(rng);
    std::uniform_int_distribution<std::int64_t> num(1, q - 1);
    cuts.insert(Rational(num(rng), q));
  }
  std::vector<Rational> weights;
  Rational prev;
  for (const Rational& c : cuts) {
    weights.push_back(c - prev);
    prev = c;
  }
  weights.push_back(Rational(1) - prev);
  return weights;
}

/// Integer shares a_i / sum(a), so every weight has denominator <= total.
inline std::vector<Rational> random_bounded_partition(Rng& rng, std::size_t parts,
                                                      std::int64_t total) {
  std::vector<std::int64_t> counts(parts, 1);
  std::uniform_int_distribution<std::size_t> pick(0, parts - 1);
  for (std::int64_t left = total - static_cast<std::int64_t>(parts); left > 0; --left) {
    ++counts[pick(rng)];
  }
  std::vector<Rational> weights;
  for (std::int64_t c : counts) weights.push_back(Rational(c, total));
  return weights;
}

struct RandomMapSpec {
  std::size_t max_sources = 12;
  std::size_t max_targets = 12;
  std::size_t max_out_degree = 4;
  double split_probability = 0.4;
  std::int64_t max_den = 12;
  bool bounded_denominators = false;  // use random_bounded_partition with total <= max_den
};

/// Crossmap from the given sources onto a subset of `targets`.
inline Crossmap random_crossmap_over(Rng& rng, const std::vector<Key>& sources,
                                     const std::vector<Key>& targets, const RandomMapSpec& spec) {
  EdgeListDraft draft;
  std::bernoulli_distribution split(spec.split_probability);
  std::uniform_int_distribution<std::size_t> degree(2, std::max<std::size_t>(
                                                           2, std::min(spec.max_out_degree, targets.size())));
  for (const Key& s : sources) {
    std::size_t k = 1;
    if (targets.size() > 1 && split(rng)) k = degree(rng);
    std::vector<Key> chosen = targets;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(k), chosen.end());
    std::vector<Rational> weights;
    if (spec.bounded_denominators) {
      std::uniform_int_distribution<std::int64_t> total(static_cast<std::int64_t>(k), spec.max_den);
      weights = random_bounded_partition(rng, k, total(rng));
    } else {
      weights = random_partition_of_one(rng, k, std::max<std::int64_t>(spec.max_den, static_cast<std::int64_t>(k) + 1));
    }
    for (std::size_t i = 0; i < k; ++i) draft.edges.push_back({s, chosen[i], weights[i]});
  }
  return require_crossmap(draft);
}

inline Crossmap random_crossmap(Rng& rng, const RandomMapSpec& spec = {},
                                const std::string& src_prefix = "s",
                                const std::string& dst_prefix = "t") {
  std::uniform_int_distribution<std::size_t> ns(1, spec.max_sources);
  std::uniform_int_distribution<std::size_t> nt(1, spec.max_targets);
  return random_crossmap_over(rng, make_keys(src_prefix, ns(rng)), make_keys(dst_prefix, nt(rng)), spec);
}

/// Non-negative rational values over a random subset of `keys` (all keys when
/// `all` is set).
inline SharedMassArray random_array(Rng& rng, const std::vector<Key>& keys, bool all = false) {
  SharedMassArray a;
  std::bernoulli_distribution keep(0.7);
  std::uniform_int_distribution<std::int64_t> num(0, 1000);
  std::uniform_int_distribution<std::int64_t> den(1, 9);
  for (const Key& k : keys) {
    if (all || keep(rng)) a.insert(k, Rational(num(rng), den(rng)));
  }
  return a;
}

}  // namespace crossmap::testing

#endif  // CROSSMAP_TESTS_RANDOM_CROSSMAP_HPP
