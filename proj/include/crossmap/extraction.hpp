#ifndef CROSSMAP_EXTRACTION_HPP
#define CROSSMAP_EXTRACTION_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "crossmap/core.hpp"
#include "crossmap/io.hpp"
#include "crossmap/process.hpp"

namespace crossmap {

/// Closest p/q to `value` with 1 <= q <= max_denominator; ties go to the
/// smaller denominator.
///
/// Walks the continued fraction of `value`. The answer is one of the two
/// neighbours of `value` in the Farey sequence of order max_denominator: the
/// last convergent within the bound, or the largest admissible
/// semiconvergent after it.
inline Rational rationalize(const Rational& value, std::int64_t max_denominator) {
  if (max_denominator < 1) throw Error("max_denominator must be at least 1");
  const BigInt bound = max_denominator;
  if (value.denominator() <= bound) return value;

  // Convergents p/q of the continued fraction of value.
  BigInt p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
  BigInt p = value.floor(), q = 1;
  Rational rest = value - Rational(p, 1);
  while (!rest.is_zero()) {
    const Rational inv = Rational(1) / rest;
    const BigInt a = inv.floor();
    const BigInt q_next = a * q + q_prev;
    if (q_next > bound) {
      // Largest semiconvergent (p_prev + t*p)/(q_prev + t*q) within the bound.
      const BigInt t = (bound - q_prev) / q;
      const Rational convergent(p, q);
      if (t == 0) return convergent;
      const Rational semi(p_prev + t * p, q_prev + t * q);
      const Rational d_conv = abs(value - convergent);
      const Rational d_semi = abs(value - semi);
      if (d_semi < d_conv) return semi;
      if (d_conv < d_semi) return convergent;
      return q <= semi.denominator() ? convergent : semi;
    }
    const BigInt p_next = a * p + p_prev;
    p_prev = std::exchange(p, p_next);
    q_prev = std::exchange(q, q_next);
    rest = inv - Rational(a, 1);
  }
  return Rational(p, q);
}

/// Thrown when a probed transform fails, emits unparsable output, or answers
/// the same probe differently.
class ProbeError : public Error {
 public:
  using Error::Error;
};

using ArrayFunction = std::function<SharedMassArray(const SharedMassArray&)>;

/// An opaque array-to-array transformation to be probed: either a function
/// in this process, or a shell command that reads an array CSV on standard
/// input and writes one to standard output.
class BlackboxTransform {
 public:
  enum class Kind { in_process, external_command };

  static BlackboxTransform in_process(ArrayFunction fn) {
    BlackboxTransform t;
    t.kind_ = Kind::in_process;
    t.fn_ = std::move(fn);
    return t;
  }
  static BlackboxTransform external_command(std::string command) {
    BlackboxTransform t;
    t.kind_ = Kind::external_command;
    t.command_ = std::move(command);
    return t;
  }

  Kind kind() const { return kind_; }
  const std::string& command() const { return command_; }

  SharedMassArray operator()(const SharedMassArray& input) const {
    if (kind_ == Kind::in_process) {
      try {
        return fn_(input);
      } catch (const std::exception& e) {
        throw ProbeError(std::string("transform failed: ") + e.what());
      }
    }
    const CommandResult r = run_command(command_, write_array(input));
    if (r.exit_code != 0) {
      throw ProbeError("command exited with status " + std::to_string(r.exit_code) +
                       (r.err.empty() ? "" : ": " + r.err));
    }
    try {
      return read_array(r.out);
    } catch (const Error& e) {
      throw ProbeError(std::string("unparsable command output: ") + e.what());
    }
  }

 private:
  Kind kind_ = Kind::in_process;
  ArrayFunction fn_;
  std::string command_;
};

struct ProbeOptions {
  Rational tolerance = Rational(1, 1000000000);
  std::optional<std::int64_t> rationalize_max_denominator;
  std::size_t jobs = 1;
  std::size_t determinism_sample = 1;  // keys probed twice, serially, before the rest
};

struct ExtractionResult {
  std::optional<Crossmap> crossmap;
  /// Non-zero probe outputs per source, before any snapping.
  std::map<Key, std::vector<std::pair<Key, Rational>>> raw_weights;
  /// Sources whose weights total more than `tolerance` away from 1.
  std::vector<std::pair<Key, Rational>> nonconforming_sources;
  Rational tolerance_used;
  bool rationalized = false;
  ValidationReport report;
  std::size_t probes_sent = 0;
};

/// Recovers the crossmap behind a linear blackbox by feeding it one
/// indicator array per source key ({j: 1, others: 0}); the output is the
/// row of weights leaving j.
///
/// With rationalize_max_denominator set, each weight snaps to the nearest
/// fraction within that denominator bound when it lies within tolerance.
/// A crossmap is returned only when every source then sums to exactly 1.
inline ExtractionResult probe_blackbox(const BlackboxTransform& transform,
                                       std::span<const Key> source_keys,
                                       const ProbeOptions& opts = {}) {
  if (source_keys.empty()) throw Error("probe needs at least one source key");
  std::vector<Key> keys(source_keys.begin(), source_keys.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  const auto indicator = [&keys](std::size_t j) {
    SharedMassArray a;
    for (std::size_t i = 0; i < keys.size(); ++i) a.insert(keys[i], Rational(i == j ? 1 : 0));
    return a;
  };

  ExtractionResult result;
  result.tolerance_used = opts.tolerance;
  result.rationalized = opts.rationalize_max_denominator.has_value();

  std::vector<std::optional<SharedMassArray>> outputs(keys.size());
  std::atomic<std::size_t> probes{0};

  const std::size_t sample = std::min(opts.determinism_sample, keys.size());
  for (std::size_t j = 0; j < sample; ++j) {
    const SharedMassArray input = indicator(j);
    SharedMassArray first = transform(input);
    SharedMassArray second = transform(input);
    probes += 2;
    if (first != second) {
      throw ProbeError("nondeterministic transform: probing " + keys[j].str() +
                       " twice gave different outputs");
    }
    outputs[j] = std::move(first);
  }

  std::atomic<std::size_t> next{sample};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t j = next++; j < keys.size(); j = next++) {
      try {
        outputs[j] = transform(indicator(j));
        ++probes;
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, keys.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  result.probes_sent = probes;

  EdgeListDraft draft;
  for (std::size_t j = 0; j < keys.size(); ++j) {
    auto& raw = result.raw_weights[keys[j]];
    Rational total;
    for (const auto& [target, value] : outputs[j]->entries()) {
      if (!value) {
        throw ProbeError("missing value for " + target.str() + " when probing " + keys[j].str());
      }
      if (value->is_zero()) continue;
      raw.emplace_back(target, *value);
      Rational w = *value;
      if (opts.rationalize_max_denominator) {
        const Rational snapped = rationalize(w, *opts.rationalize_max_denominator);
        if (abs(snapped - w) <= opts.tolerance) w = snapped;
      }
      total += w;
      draft.edges.push_back({keys[j], target, w});
    }
    if (abs(total - Rational(1)) > opts.tolerance) {
      result.nonconforming_sources.emplace_back(keys[j], total);
    }
  }

  if (result.nonconforming_sources.empty()) {
    auto built = build_crossmap(draft);
    result.report = std::move(built.report);
    result.crossmap = std::move(built.value);
  } else {
    for (const auto& [key, total] : result.nonconforming_sources) {
      result.report.add({Severity::error, "mass_not_preserved", key.str(),
                         "probe of " + key.str() + " returned total " + to_string(total) +
                             ", outside 1 +/- " + to_string(opts.tolerance),
                         total});
    }
  }
  return result;
}

}  // namespace crossmap

#endif  // CROSSMAP_EXTRACTION_HPP
