#ifndef CROSSMAP_ALGEBRA_HPP
#define CROSSMAP_ALGEBRA_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crossmap/core.hpp"
#include "crossmap/transform.hpp"

namespace crossmap {

/// Dense source-by-target weight grid, row-major. Rows follow the crossmap's
/// sorted sources, columns its sorted targets.
///
/// Meant as an oracle and export form; transforms run on the edge list.
struct MatrixEncoding {
  std::vector<Key> row_keys;
  std::vector<Key> col_keys;
  std::vector<Rational> values;

  std::size_t rows() const { return row_keys.size(); }
  std::size_t cols() const { return col_keys.size(); }
  const Rational& at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  Rational& at(std::size_t row, std::size_t col) { return values[row * cols() + col]; }

  std::vector<Rational> row_sums() const {
    std::vector<Rational> sums(rows());
    for (std::size_t j = 0; j < rows(); ++j) {
      for (std::size_t k = 0; k < cols(); ++k) sums[j] += at(j, k);
    }
    return sums;
  }
};

inline std::size_t index_of(std::span<const Key> sorted_keys, const Key& key) {
  const auto it = std::lower_bound(sorted_keys.begin(), sorted_keys.end(), key);
  if (it == sorted_keys.end() || *it != key) {
    throw Error("key '" + key.str() + "' not in index");
  }
  return static_cast<std::size_t>(it - sorted_keys.begin());
}

inline MatrixEncoding to_matrix(const Crossmap& map) {
  MatrixEncoding m{map.sources(), map.targets(), {}};
  m.values.assign(m.rows() * m.cols(), Rational());
  for (const Edge& e : map.edges()) {
    m.at(index_of(m.row_keys, e.from), index_of(m.col_keys, e.to)) = e.weight;
  }
  return m;
}

/// y = C'x over dense vectors, x indexed by row keys and y by column keys.
inline std::vector<Rational> matvec_dense(const MatrixEncoding& m, std::span<const Rational> x) {
  if (x.size() != m.rows()) {
    throw Error("dimension mismatch: vector has " + std::to_string(x.size()) +
                " entries, matrix has " + std::to_string(m.rows()) + " rows");
  }
  std::vector<Rational> y(m.cols());
  for (std::size_t j = 0; j < m.rows(); ++j) {
    if (x[j].is_zero()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (!m.at(j, k).is_zero()) y[k] += m.at(j, k) * x[j];
    }
  }
  return y;
}

/// Dense vector over the crossmap's sources, zero where the array has no
/// entry. Throws if the array holds a key outside the sources.
inline std::vector<Rational> pad_to_sources(const Crossmap& map, const SharedMassArray& array) {
  std::vector<Rational> x(map.sources().size());
  for (const auto& [k, v] : array.entries()) {
    if (!v) throw Error("missing value for key '" + k.str() + "'");
    x[index_of(map.sources(), k)] = *v;
  }
  return x;
}

/// Chains A->B with B->C into A->C. Weights multiply along paths and sum over
/// intermediate keys; pairs with zero total weight are omitted.
inline Crossmap compose(const Crossmap& first, const Crossmap& second) {
  CoverageReport gap;
  for (const Key& t : first.targets()) {
    if (!second.has_source(t)) gap.uncovered_keys.push_back(t);
  }
  if (!gap.uncovered_keys.empty()) {
    gap.conformable = false;
    throw CoverageError(std::move(gap), 2);
  }

  std::map<std::pair<Key, Key>, Rational> weights;
  for (const Edge& ab : first.edges()) {
    for (const Edge& bc : second.outgoing(ab.to)) {
      weights[{ab.from, bc.to}] += ab.weight * bc.weight;
    }
  }
  EdgeListDraft draft;
  for (auto& [pair, w] : weights) {
    if (!w.is_zero()) draft.edges.push_back({pair.first, pair.second, w});
  }
  auto built = build_crossmap(draft);
  if (!built) {
    throw std::logic_error("composition of valid crossmaps failed validation: " +
                           built.report.findings.front().message);
  }
  return std::move(*built.value);
}

/// Left fold of compose over a chain of at least one crossmap. Coverage
/// failures carry the 1-based index of the crossmap that could not accept
/// its predecessor's targets.
inline Crossmap compose_all(std::span<const Crossmap> chain) {
  if (chain.empty()) throw Error("compose needs at least one crossmap");
  Crossmap acc = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    try {
      acc = compose(acc, chain[i]);
    } catch (const CoverageError& e) {
      throw CoverageError(e.report(), i + 1);
    }
  }
  return acc;
}

/// Attempts to invert a crossmap by transposing its edges. Succeeds only when
/// every target's incoming weights sum to exactly 1, which in practice means
/// the map is a pure renaming.
inline Checked<Crossmap> reverse(const Crossmap& map) {
  EdgeListDraft transposed;
  for (const Edge& e : map.edges()) transposed.edges.push_back({e.to, e.from, e.weight});
  auto built = build_crossmap(transposed);
  for (Finding& f : built.report.findings) {
    if (f.code != "mass_not_preserved") continue;
    const Key source(f.subject);
    std::size_t links = 0;
    std::string weights;
    for (const Edge& e : transposed.edges) {
      if (e.from != source) continue;
      ++links;
      weights += (weights.empty() ? "" : ", ") + to_string(e.weight);
    }
    f.code = "lateral_mapping";
    f.message = "reversed source " + source.str() + " has " + std::to_string(links) +
                " outgoing links with weights " + weights + " summing to " + to_string(*f.sum) +
                "; the transposed relation violates the mass-preserving condition";
  }
  return built;
}

}  // namespace crossmap

#endif  // CROSSMAP_ALGEBRA_HPP
