#ifndef CROSSMAP_CORE_HPP
#define CROSSMAP_CORE_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crossmap/error.hpp"
#include "crossmap/rational.hpp"

namespace crossmap {

/// Category identifier in a source or target classification.
///
/// Surrounding whitespace is stripped on construction; comparison is
/// byte-exact with no case folding.
class Key {
 public:
  explicit Key(std::string_view text) : text_(detail::trim(text)) {
    if (text_.empty()) {
      throw Error("key must be non-empty");
    }
  }
  Key(const char* text) : Key(std::string_view(text)) {}  // NOLINT(implicit)

  const std::string& str() const { return text_; }

  friend bool operator==(const Key&, const Key&) = default;
  friend std::strong_ordering operator<=>(const Key& a, const Key& b) {
    const int c = a.text_.compare(b.text_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  std::string text_;
};

inline std::ostream& operator<<(std::ostream& os, const Key& k) { return os << k.str(); }

struct Edge {
  Key from;
  Key to;
  Rational weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

inline bool edge_order(const Edge& a, const Edge& b) {
  if (a.from != b.from) return a.from < b.from;
  return a.to < b.to;
}

/// Unvalidated edge list, as read from a file or assembled by hand.
struct EdgeListDraft {
  std::vector<Edge> edges;
  std::optional<std::string> provenance_note;
};

enum class Severity { error, warning };

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

struct Finding {
  Severity severity = Severity::error;
  std::string code;
  std::string subject;  // a key, or "from -> to" for an edge
  std::string message;
  std::optional<Rational> sum;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const {
    return std::none_of(findings.begin(), findings.end(),
                        [](const Finding& f) { return f.severity == Severity::error; });
  }
  void add(Finding f) { findings.push_back(std::move(f)); }
  void merge(const ValidationReport& other) {
    findings.insert(findings.end(), other.findings.begin(), other.findings.end());
  }
};

/// A value that exists only when its report carries no errors. Warnings may
/// accompany a successful value.
template <class T>
struct Checked {
  std::optional<T> value;
  ValidationReport report;

  explicit operator bool() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

class Crossmap;
Checked<Crossmap> build_crossmap(const EdgeListDraft& draft);

/// Validated crossmap: every source distributes exactly all of its mass.
///
/// Only obtainable through build_crossmap (or operations that call it), so a
/// Crossmap value always satisfies the mass-preserving condition. Edges are
/// kept sorted by (from, to); source and target key sets are sorted.
class Crossmap {
 public:
  const std::vector<Key>& sources() const { return sources_; }
  const std::vector<Key>& targets() const { return targets_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_source(const Key& k) const {
    return std::binary_search(sources_.begin(), sources_.end(), k);
  }
  bool has_target(const Key& k) const {
    return std::binary_search(targets_.begin(), targets_.end(), k);
  }

  /// Outgoing edges of `source`, sorted by target. Empty if not a source.
  std::span<const Edge> outgoing(const Key& source) const {
    const auto lo = std::lower_bound(edges_.begin(), edges_.end(), source,
                                     [](const Edge& e, const Key& k) { return e.from < k; });
    auto hi = lo;
    while (hi != edges_.end() && hi->from == source) ++hi;
    return {lo, hi};
  }

  EdgeListDraft to_draft() const { return EdgeListDraft{edges_, std::nullopt}; }

  friend bool operator==(const Crossmap& a, const Crossmap& b) { return a.edges_ == b.edges_; }

 private:
  explicit Crossmap(std::vector<Edge> sorted_edges) : edges_(std::move(sorted_edges)) {
    std::set<Key> targets;
    for (const Edge& e : edges_) {
      if (sources_.empty() || sources_.back() != e.from) sources_.push_back(e.from);
      targets.insert(e.to);
    }
    targets_.assign(targets.begin(), targets.end());
  }

  friend Checked<Crossmap> build_crossmap(const EdgeListDraft& draft);

  std::vector<Key> sources_;
  std::vector<Key> targets_;
  std::vector<Edge> edges_;
};

/// A mass value; std::nullopt marks an explicitly missing (NA) entry.
using MassValue = std::optional<Rational>;

/// Associative array of key to mass whose sum is a meaningful total.
///
/// Missing entries are representable so that validation can reject them;
/// they never contribute to totals.
class SharedMassArray {
 public:
  using Entries = std::map<Key, MassValue>;

  SharedMassArray() = default;
  SharedMassArray(std::initializer_list<std::pair<const Key, Rational>> init) {
    for (const auto& [k, v] : init) insert(k, v);
  }

  /// Throws if the key is already present.
  void insert(const Key& key, MassValue value) {
    if (!entries_.emplace(key, std::move(value)).second) {
      throw Error("duplicate key '" + key.str() + "' in shared mass array");
    }
  }
  void insert_missing(const Key& key) { insert(key, std::nullopt); }

  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(const Key& k) const { return entries_.count(k) != 0; }
  const MassValue& at(const Key& k) const {
    const auto it = entries_.find(k);
    if (it == entries_.end()) throw Error("key '" + k.str() + "' not in array");
    return it->second;
  }

  std::vector<Key> keys() const {
    std::vector<Key> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  /// Sum of all present (non-missing) values.
  Rational total() const {
    Rational sum;
    for (const auto& [k, v] : entries_) {
      if (v) sum += *v;
    }
    return sum;
  }

  bool has_missing() const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const auto& kv) { return !kv.second.has_value(); });
  }

  friend bool operator==(const SharedMassArray&, const SharedMassArray&) = default;

 private:
  Entries entries_;
};

namespace detail {

inline std::string edge_subject(const Key& from, const Key& to) {
  return from.str() + " -> " + to.str();
}

/// Shared audit behind build_crossmap and check_mass_preserving. Returns the
/// canonical deduplicated edge list alongside the findings.
inline std::pair<std::vector<Edge>, ValidationReport> audit_draft(const EdgeListDraft& draft) {
  ValidationReport report;
  std::vector<Edge> edges = draft.edges;
  std::stable_sort(edges.begin(), edges.end(), edge_order);

  if (edges.empty()) {
    report.add({Severity::error, "empty_crossmap", "", "crossmap has no edges", std::nullopt});
    return {std::move(edges), std::move(report)};
  }

  std::vector<Edge> unique;
  unique.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!unique.empty() && unique.back().from == edges[i].from && unique.back().to == edges[i].to) {
      const bool first_repeat = i < 2 || !(edges[i - 2].from == edges[i].from && edges[i - 2].to == edges[i].to);
      if (first_repeat) {
        report.add({Severity::error, "duplicate_edge", edge_subject(edges[i].from, edges[i].to),
                    "edge (" + edges[i].from.str() + ", " + edges[i].to.str() +
                        ") appears more than once",
                    std::nullopt});
      }
      continue;
    }
    unique.push_back(edges[i]);
  }

  const Rational one(1);
  for (const Edge& e : unique) {
    if (e.weight.sign() <= 0 || e.weight > one) {
      report.add({Severity::error, "weight_out_of_range", edge_subject(e.from, e.to),
                  "weight " + to_string(e.weight) + " is outside (0, 1]", e.weight});
    }
  }

  for (auto it = unique.begin(); it != unique.end();) {
    Rational sum;
    auto next = it;
    for (; next != unique.end() && next->from == it->from; ++next) sum += next->weight;
    if (sum != one) {
      report.add({Severity::error, "mass_not_preserved", it->from.str(),
                  "outgoing weights of source " + it->from.str() + " sum to " + to_string(sum) +
                      ", not 1",
                  sum});
    }
    it = next;
  }
  return {std::move(unique), std::move(report)};
}

}  // namespace detail

/// Validates a draft and, when it carries no errors, returns the canonical
/// crossmap. Never throws for data problems: every violation is a finding.
inline Checked<Crossmap> build_crossmap(const EdgeListDraft& draft) {
  auto [edges, report] = detail::audit_draft(draft);
  Checked<Crossmap> out;
  if (report.ok()) {
    out.value = Crossmap(std::move(edges));
  }
  out.report = std::move(report);
  return out;
}

/// Like build_crossmap, but throws with the first finding on failure. For
/// callers that construct maps they know to be valid.
inline Crossmap require_crossmap(const EdgeListDraft& draft) {
  auto built = build_crossmap(draft);
  if (!built) {
    throw Error("invalid crossmap: " + built.report.findings.front().message);
  }
  return std::move(*built.value);
}

inline Crossmap identity_crossmap(std::span<const Key> keys) {
  if (keys.empty()) {
    throw Error("identity crossmap needs at least one key");
  }
  EdgeListDraft draft;
  const std::set<Key> unique(keys.begin(), keys.end());
  for (const Key& k : unique) draft.edges.push_back({k, k, Rational(1)});
  return require_crossmap(draft);
}

inline Crossmap identity_crossmap(std::initializer_list<Key> keys) {
  const std::vector<Key> v(keys);
  return identity_crossmap(std::span<const Key>(v));
}

}  // namespace crossmap

#endif  // CROSSMAP_CORE_HPP
