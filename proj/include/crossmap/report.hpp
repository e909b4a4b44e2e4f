#ifndef CROSSMAP_REPORT_HPP
#define CROSSMAP_REPORT_HPP

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossmap/algebra.hpp"
#include "crossmap/extraction.hpp"
#include "crossmap/graph.hpp"
#include "crossmap/transform.hpp"
#include "crossmap/validation.hpp"

// JSON and aligned-text renderings of the library's reports. Rationals are
// always emitted as exact "p/q" (or integer) strings.

namespace crossmap {

using json = nlohmann::ordered_json;

inline json keys_json(const std::vector<Key>& keys) {
  json out = json::array();
  for (const Key& k : keys) out.push_back(k.str());
  return out;
}

inline json to_json(const Finding& f) {
  json j{{"severity", to_string(f.severity)},
         {"code", f.code},
         {"subject", f.subject},
         {"message", f.message}};
  if (f.sum) j["sum"] = to_string(*f.sum);
  return j;
}

inline json to_json(const ValidationReport& r) {
  json findings = json::array();
  for (const Finding& f : r.findings) findings.push_back(to_json(f));
  return json{{"ok", r.ok()}, {"findings", std::move(findings)}};
}

inline json to_json(const CoverageReport& r) {
  return json{{"conformable", r.conformable},
              {"uncovered_keys", keys_json(r.uncovered_keys)},
              {"mass_at_risk", to_string(r.mass_at_risk)}};
}

inline json to_json(const ArrayFinding& f) {
  json j{{"key", f.key.str()}, {"kind", to_string(f.kind)}};
  j["value"] = f.value ? json(to_string(*f.value)) : json(nullptr);
  j["message"] = f.message;
  return j;
}

inline json to_json(const std::vector<ArrayFinding>& findings) {
  json out = json::array();
  for (const auto& f : findings) out.push_back(to_json(f));
  return out;
}

inline json to_json(const TransformReceipt& r) {
  return json{{"input_total", to_string(r.input_total)},
              {"output_total", to_string(r.output_total)},
              {"dropped_mass", to_string(r.dropped_mass)},
              {"split_mass", to_string(r.split_mass)},
              {"dropped_keys", keys_json(r.dropped_keys)}};
}

inline json to_json(const Edge& e) {
  return json{{"from", e.from.str()}, {"to", e.to.str()}, {"weight", to_string(e.weight)}};
}

inline json to_json(const Component& c) {
  json edges = json::array();
  for (const Edge& e : c.edges) edges.push_back(to_json(e));
  return json{{"relation_type", to_string(c.relation_type)},
              {"sources", keys_json(c.sources)},
              {"targets", keys_json(c.targets)},
              {"edges", std::move(edges)}};
}

inline json type_counts_json(const std::map<RelationType, std::size_t>& counts) {
  json out = json::object();
  for (RelationType t : kRelationTypes) {
    const auto it = counts.find(t);
    out[to_string(t)] = it == counts.end() ? 0 : it->second;
  }
  return out;
}

inline json to_json(const std::vector<Component>& comps) {
  json list = json::array();
  for (const Component& c : comps) list.push_back(to_json(c));
  std::map<RelationType, std::size_t> counts;
  for (const Component& c : comps) ++counts[c.relation_type];
  return json{{"component_count", comps.size()},
              {"component_type_counts", type_counts_json(counts)},
              {"components", std::move(list)}};
}

inline json to_json(const CrossmapSummary& s) {
  json targets = json::array();
  for (const TargetSummary& t : s.targets) {
    targets.push_back(json{{"target", t.target.str()},
                           {"incoming_count", t.incoming.size()},
                           {"incoming", keys_json(t.incoming)}});
  }
  return json{{"edge_count", s.edge_count},
              {"source_count", s.source_count},
              {"target_count", s.target_count},
              {"component_count", s.component_count},
              {"component_type_counts", type_counts_json(s.component_type_counts)},
              {"fractional_edge_count", s.fractional_edge_count},
              {"targets", std::move(targets)}};
}

inline json to_json(const ImputationMetrics& m) {
  json j{{"component_type_counts", type_counts_json(m.component_type_counts)},
         {"fractional_edge_count", m.fractional_edge_count},
         {"split_source_count", m.split_source_count},
         {"potential_split_share", to_string(m.potential_split_share)}};
  j["realized_split_mass_share"] =
      m.realized_split_mass_share ? json(to_string(*m.realized_split_mass_share)) : json(nullptr);
  return j;
}

inline json to_json(const ExtractionResult& r) {
  json raw = json::object();
  for (const auto& [source, outputs] : r.raw_weights) {
    json row = json::array();
    for (const auto& [target, w] : outputs) {
      row.push_back(json{{"to", target.str()}, {"weight", to_string(w)}});
    }
    raw[source.str()] = std::move(row);
  }
  json nonconforming = json::array();
  for (const auto& [k, total] : r.nonconforming_sources) {
    nonconforming.push_back(json{{"source", k.str()}, {"total", to_string(total)}});
  }
  return json{{"extracted", r.crossmap.has_value()},
              {"probes_sent", r.probes_sent},
              {"tolerance_used", to_string(r.tolerance_used)},
              {"rationalized", r.rationalized},
              {"nonconforming_sources", std::move(nonconforming)},
              {"report", to_json(r.report)},
              {"raw_weights", std::move(raw)}};
}

// ---------------------------------------------------------------------------
// Text tables.

/// Left-aligned columns separated by two spaces; numeric columns are
/// right-aligned when `right` is set for them.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows,
                                const std::vector<bool>& right = {}) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  const auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool last = c + 1 == row.size();
      const std::size_t pad = width[c] - row[c].size();
      if (c < right.size() && right[c]) {
        line += std::string(pad, ' ') + row[c];
      } else {
        line += row[c];
        if (!last) line += std::string(pad, ' ');
      }
      if (!last) line += "  ";
    }
    os << line << '\n';
  };
  emit(header);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& row : rows) emit(row);
  return os.str();
}

inline std::string render_text(const ValidationReport& r) {
  if (r.findings.empty()) return "ok: no findings\n";
  std::vector<std::vector<std::string>> rows;
  for (const Finding& f : r.findings) {
    rows.push_back({to_string(f.severity), f.code, f.subject, f.sum ? to_string(*f.sum) : "",
                    f.message});
  }
  return std::string(r.ok() ? "ok" : "FAILED") + "\n" +
         render_table({"severity", "code", "subject", "sum", "message"}, rows);
}

inline std::string render_text(const TransformReceipt& r) {
  std::string out = "input_total   " + to_string(r.input_total) + "\n" +
                    "output_total  " + to_string(r.output_total) + "\n" +
                    "dropped_mass  " + to_string(r.dropped_mass) + "\n" +
                    "split_mass    " + to_string(r.split_mass) + "\n";
  if (!r.dropped_keys.empty()) {
    out += "dropped_keys ";
    for (const Key& k : r.dropped_keys) out += " " + k.str();
    out += "\n";
  }
  return out;
}

inline constexpr std::size_t kDisplayedKeys = 10;

inline std::string join_keys(const std::vector<Key>& keys, std::size_t limit) {
  std::string out;
  for (std::size_t i = 0; i < keys.size() && i < limit; ++i) {
    out += (i ? "," : "") + keys[i].str();
  }
  if (keys.size() > limit) out += ",...";
  return out;
}

inline std::string render_text(const CrossmapSummary& s) {
  std::vector<std::vector<std::string>> rows;
  for (const TargetSummary& t : s.targets) {
    rows.push_back({t.target.str(), std::to_string(t.incoming.size()),
                    join_keys(t.incoming, kDisplayedKeys)});
  }
  std::string out =
      render_table({"target", "incoming", "incoming_sources"}, rows, {false, true, false});
  out += "\nedges " + std::to_string(s.edge_count) + ", sources " +
         std::to_string(s.source_count) + ", targets " + std::to_string(s.target_count) +
         ", fractional edges " + std::to_string(s.fractional_edge_count) + "\n";
  out += "components " + std::to_string(s.component_count) + ":";
  for (RelationType t : kRelationTypes) {
    const auto it = s.component_type_counts.find(t);
    out += std::string(" ") + to_string(t) + "=" +
           std::to_string(it == s.component_type_counts.end() ? 0 : it->second);
  }
  return out + "\n";
}

inline std::string render_text(const ImputationMetrics& m) {
  std::string out = "split sources         " + std::to_string(m.split_source_count) + "\n" +
                    "fractional edges      " + std::to_string(m.fractional_edge_count) + "\n" +
                    "potential split share " + to_string(m.potential_split_share) + "\n";
  if (m.realized_split_mass_share) {
    out += "realized split share  " + to_string(*m.realized_split_mass_share) + "\n";
  }
  return out;
}

inline std::string render_text(const std::vector<Component>& comps) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Component& c = comps[i];
    rows.push_back({std::to_string(i), to_string(c.relation_type),
                    std::to_string(c.edges.size()), join_keys(c.sources, kDisplayedKeys),
                    join_keys(c.targets, kDisplayedKeys)});
  }
  return render_table({"#", "relation_type", "edges", "sources", "targets"}, rows,
                      {true, false, true, false, false});
}

}  // namespace crossmap

#endif  // CROSSMAP_REPORT_HPP
