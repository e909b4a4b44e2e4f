#ifndef CROSSMAP_TRANSFORM_HPP
#define CROSSMAP_TRANSFORM_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "crossmap/core.hpp"
#include "crossmap/validation.hpp"

namespace crossmap {

/// Thrown when an array holds keys the crossmap cannot route.
class CoverageError : public Error {
 public:
  explicit CoverageError(CoverageReport report, std::size_t step = 0)
      : Error(describe(report, step)), report_(std::move(report)), step_(step) {}

  const CoverageReport& report() const { return report_; }
  /// 1-based position in a chain of crossmaps, or 0 for a single transform.
  std::size_t step() const { return step_; }

 private:
  static std::string describe(const CoverageReport& r, std::size_t step) {
    std::string msg = std::to_string(r.uncovered_keys.size()) + " key(s) not covered by crossmap";
    if (step != 0) msg += " at step " + std::to_string(step);
    msg += " (mass at risk " + to_string(r.mass_at_risk) + "):";
    for (const Key& k : r.uncovered_keys) msg += " " + k.str();
    return msg;
  }

  CoverageReport report_;
  std::size_t step_;
};

/// Thrown when an array fails hygiene checks (missing or negative values).
class ArrayError : public Error {
 public:
  explicit ArrayError(std::vector<ArrayFinding> findings)
      : Error(findings.empty() ? "invalid array" : findings.front().message),
        findings_(std::move(findings)) {}
  const std::vector<ArrayFinding>& findings() const { return findings_; }

 private:
  std::vector<ArrayFinding> findings_;
};

enum class UncoveredPolicy { error, drop_and_report };

struct TransformOptions {
  bool emit_zero_targets = true;
  UncoveredPolicy on_uncovered = UncoveredPolicy::error;
};

struct TransformReceipt {
  Rational input_total;
  Rational output_total;
  Rational dropped_mass;
  Rational split_mass;  // mass entering sources with more than one outgoing edge
  std::vector<Key> dropped_keys;

  bool balanced() const { return input_total == output_total + dropped_mass; }
};

struct TransformResult {
  SharedMassArray output;
  TransformReceipt receipt;
};

/// Redistributes `array` over the crossmap's targets: join each entry with its
/// outgoing edges, multiply by the weight, then sum per target.
inline TransformResult apply_transform(const Crossmap& map, const SharedMassArray& array,
                                       const TransformOptions& opts = {}) {
  if (auto findings = check_array(array); !findings.empty()) {
    throw ArrayError(std::move(findings));
  }
  const CoverageReport coverage = check_coverage(map, array);
  if (!coverage.conformable && opts.on_uncovered == UncoveredPolicy::error) {
    throw CoverageError(coverage);
  }

  TransformReceipt receipt;
  receipt.input_total = array.total();
  receipt.dropped_keys = coverage.uncovered_keys;
  receipt.dropped_mass = coverage.mass_at_risk;

  std::map<Key, Rational> sums;
  for (const auto& [key, value] : array.entries()) {
    const auto out = map.outgoing(key);
    if (out.empty()) continue;
    if (out.size() > 1) receipt.split_mass += *value;
    for (const Edge& e : out) sums[e.to] += *value * e.weight;
  }

  TransformResult result;
  if (opts.emit_zero_targets) {
    for (const Key& t : map.targets()) {
      const auto it = sums.find(t);
      result.output.insert(t, it == sums.end() ? Rational() : it->second);
    }
  } else {
    for (auto& [t, v] : sums) {
      if (!v.is_zero()) result.output.insert(t, v);
    }
  }
  receipt.output_total = result.output.total();
  if (!receipt.balanced()) {
    throw std::logic_error("mass conservation violated; crossmap invariant broken");
  }
  result.receipt = std::move(receipt);
  return result;
}

struct SequenceResult {
  SharedMassArray output;
  std::vector<TransformReceipt> receipts;
};

/// Applies crossmaps left to right. Coverage failures name the failing step.
inline SequenceResult apply_sequence(std::span<const Crossmap> maps, const SharedMassArray& array,
                                     const TransformOptions& opts = {}) {
  SequenceResult result{array, {}};
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (opts.on_uncovered == UncoveredPolicy::error) {
      if (auto cov = check_coverage(maps[i], result.output); !cov.conformable) {
        throw CoverageError(std::move(cov), i + 1);
      }
    }
    auto step = apply_transform(maps[i], result.output, opts);
    result.output = std::move(step.output);
    result.receipts.push_back(std::move(step.receipt));
  }
  return result;
}

/// Applies one crossmap to many arrays using up to `jobs` worker threads.
/// Outputs are in input order. The first failure is rethrown after all
/// workers finish.
inline std::vector<TransformResult> apply_batch(const Crossmap& map,
                                                std::span<const SharedMassArray> arrays,
                                                const TransformOptions& opts = {},
                                                std::size_t jobs = 1) {
  std::vector<std::optional<TransformResult>> slots(arrays.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < arrays.size(); i = next++) {
      try {
        slots[i] = apply_transform(map, arrays[i], opts);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(arrays.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<TransformResult> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct DropResult {
  SharedMassArray array;
  Rational dropped_mass;
};

/// Removes unwanted categories before a transform, reporting the mass removed.
inline DropResult drop_keys(const SharedMassArray& array, const std::set<Key>& keys) {
  DropResult result;
  for (const auto& [k, v] : array.entries()) {
    if (keys.count(k)) {
      if (v) result.dropped_mass += *v;
    } else {
      result.array.insert(k, v);
    }
  }
  return result;
}

/// Attaches new categories after a transform. Existing keys are never
/// overwritten.
inline SharedMassArray append_keys(const SharedMassArray& array,
                                   const std::map<Key, MassValue>& new_entries) {
  SharedMassArray out = array;
  for (const auto& [k, v] : new_entries) {
    if (out.contains(k)) {
      throw Error("cannot append key '" + k.str() + "': already present");
    }
    out.insert(k, v);
  }
  return out;
}

}  // namespace crossmap

#endif  // CROSSMAP_TRANSFORM_HPP
