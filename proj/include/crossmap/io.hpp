#ifndef CROSSMAP_IO_HPP
#define CROSSMAP_IO_HPP

#include <cstddef>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crossmap/algebra.hpp"
#include "crossmap/core.hpp"
#include "crossmap/graph.hpp"

namespace crossmap {

namespace csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
/// breaks. Accepts LF or CRLF endings and a leading UTF-8 byte order mark.
/// Blank lines are skipped.
inline std::vector<Record> parse(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool in_record = false;

  const auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
  };
  const auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    in_record = false;
  };

  while (i < text.size()) {
    if (!in_record) {
      current.line = line;
      in_record = true;
    }
    const char c = text[i];
    if (c == '"' && field.empty()) {
      // Quoted field: a quote is only special at the start of a field.
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      if (!closed) throw ParseError("unterminated quoted field", current.line);
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw ParseError("unexpected character after closing quote", line);
      }
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      i += 2;
      ++line;
    } else if (c == '\n') {
      end_record();
      ++i;
      ++line;
    } else {
      field += c;
      ++i;
    }
  }
  if (in_record) end_record();
  return records;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void expect_header(const std::vector<Record>& records,
                          const std::vector<std::string>& header) {
  if (records.empty()) throw ParseError("missing header", 1);
  if (records.front().fields != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    throw ParseError("header must be exactly '" + expected + "'", records.front().line);
  }
}

inline void expect_width(const Record& r, std::size_t width) {
  if (r.fields.size() != width) {
    throw ParseError("expected " + std::to_string(width) + " fields, found " +
                         std::to_string(r.fields.size()),
                     r.line);
  }
}

inline Key parse_key(const std::string& text, const Record& r, const char* column) {
  if (detail::trim(text).empty()) {
    throw ParseError(std::string("blank ") + column + " key", r.line);
  }
  return Key(text);
}

inline Rational parse_value(const std::string& text, const Record& r) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), r.line);
  }
}

}  // namespace csv

/// Reads a whole file, or standard input when `path` is "-".
inline std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

enum class WeightStyle { fraction, decimal };

inline std::string render(const Rational& r, WeightStyle style) {
  return style == WeightStyle::decimal ? to_decimal_string(r) : to_string(r);
}

// ---------------------------------------------------------------------------
// Edge-list files: header "from,to,weight".

inline EdgeListDraft read_edge_list(std::string_view text) {
  const auto records = csv::parse(text);
  csv::expect_header(records, {"from", "to", "weight"});
  EdgeListDraft draft;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    csv::expect_width(r, 3);
    Key from = csv::parse_key(r.fields[0], r, "from");
    Key to = csv::parse_key(r.fields[1], r, "to");
    Rational w = csv::parse_value(r.fields[2], r);
    if (w.sign() <= 0 || w > Rational(1)) {
      throw ParseError("weight must be in (0,1], got " + to_string(w), r.line);
    }
    draft.edges.push_back({std::move(from), std::move(to), std::move(w)});
  }
  return draft;
}

inline std::string write_edge_list(const Crossmap& map, WeightStyle style = WeightStyle::fraction) {
  std::string out = "from,to,weight\n";
  for (const Edge& e : map.edges()) {
    out += csv::escape(e.from.str()) + ',' + csv::escape(e.to.str()) + ',' +
           render(e.weight, style) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Array files: header "key,value"; the literal NA marks a missing value.

inline constexpr std::string_view kMissingMarker = "NA";

inline SharedMassArray read_array(std::string_view text) {
  const auto records = csv::parse(text);
  csv::expect_header(records, {"key", "value"});
  SharedMassArray array;
  std::map<Key, std::size_t> seen;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    csv::expect_width(r, 2);
    Key key = csv::parse_key(r.fields[0], r, "array");
    if (const auto [it, inserted] = seen.emplace(key, r.line); !inserted) {
      throw ParseError("duplicate key '" + key.str() + "' (first seen on line " +
                           std::to_string(it->second) + ")",
                       r.line);
    }
    if (r.fields[1] == kMissingMarker) {
      array.insert_missing(key);
    } else {
      array.insert(key, csv::parse_value(r.fields[1], r));
    }
  }
  return array;
}

inline std::string write_array(const SharedMassArray& array,
                               WeightStyle style = WeightStyle::fraction) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : array.entries()) {
    out += csv::escape(k.str()) + ',' + (v ? render(*v, style) : std::string(kMissingMarker)) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Crosswalk files: header "from,to", no weights.

struct Crosswalk {
  std::vector<std::pair<Key, Key>> links;  // sorted, unique
};

inline Crosswalk read_crosswalk(std::string_view text) {
  const auto records = csv::parse(text);
  csv::expect_header(records, {"from", "to"});
  std::map<std::pair<Key, Key>, std::size_t> seen;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    csv::expect_width(r, 2);
    std::pair<Key, Key> link{csv::parse_key(r.fields[0], r, "from"),
                             csv::parse_key(r.fields[1], r, "to")};
    if (const auto [it, inserted] = seen.emplace(link, r.line); !inserted) {
      throw ParseError("duplicate link (" + link.first.str() + ", " + link.second.str() +
                           ") (first seen on line " + std::to_string(it->second) + ")",
                       r.line);
    }
  }
  Crosswalk cw;
  for (auto& [link, line] : seen) cw.links.push_back(link);
  return cw;
}

inline std::string write_crosswalk(const Crosswalk& cw) {
  std::string out = "from,to\n";
  for (const auto& [from, to] : cw.links) {
    out += csv::escape(from.str()) + ',' + csv::escape(to.str()) + '\n';
  }
  return out;
}

enum class SplitPolicy { reject_splits, equal_split };

/// Turns an unweighted crosswalk into a crossmap. Sources linked to a single
/// target get weight 1. Sources linked to k > 1 targets are errors under
/// reject_splits and get 1/k each (with a warning) under equal_split.
inline Checked<Crossmap> import_crosswalk(const Crosswalk& cw, SplitPolicy policy) {
  std::map<Key, std::vector<Key>> targets_of;
  for (const auto& [from, to] : cw.links) targets_of[from].push_back(to);

  ValidationReport notes;
  EdgeListDraft draft;
  for (const auto& [from, targets] : targets_of) {
    const auto k = static_cast<std::int64_t>(targets.size());
    if (k > 1) {
      if (policy == SplitPolicy::reject_splits) {
        notes.add({Severity::error, "split_source", from.str(),
                   "source " + from.str() + " links to " + std::to_string(k) +
                       " targets; a crosswalk cannot say how to divide its value",
                   std::nullopt});
        continue;
      }
      notes.add({Severity::warning, "imputed_equal_split", from.str(),
                 "imputed equal split of " + from.str() + " over " + std::to_string(k) +
                     " targets (weight 1/" + std::to_string(k) + " each); review",
                 std::nullopt});
    }
    for (const Key& to : targets) draft.edges.push_back({from, to, Rational(1, k)});
  }

  if (!notes.ok()) return {std::nullopt, std::move(notes)};
  auto built = build_crossmap(draft);
  built.report.merge(notes);
  return built;
}

// ---------------------------------------------------------------------------
// Exports.

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

/// Graphviz text: left-to-right layout, one cluster per component. Edges with
/// fractional weights are dashed and labelled; unit edges are solid.
inline std::string export_dot(const Crossmap& map) {
  std::ostringstream os;
  os << "digraph crossmap {\n"
     << "  rankdir=LR;\n"
     << "  node [shape=box];\n";
  const auto comps = components(map);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Component& c = comps[i];
    os << "  subgraph cluster_" << i << " {\n"
       << "    label=" << dot_quote(to_string(c.relation_type)) << ";\n";
    os << "    { rank=same;";
    for (const Key& s : c.sources) os << ' ' << dot_quote("s:" + s.str());
    os << " }\n";
    os << "    { rank=same;";
    for (const Key& t : c.targets) os << ' ' << dot_quote("t:" + t.str());
    os << " }\n";
    for (const Key& s : c.sources) {
      os << "    " << dot_quote("s:" + s.str()) << " [label=" << dot_quote(s.str()) << "];\n";
    }
    for (const Key& t : c.targets) {
      os << "    " << dot_quote("t:" + t.str()) << " [label=" << dot_quote(t.str()) << "];\n";
    }
    for (const Edge& e : c.edges) {
      os << "    " << dot_quote("s:" + e.from.str()) << " -> " << dot_quote("t:" + e.to.str());
      if (e.weight == Rational(1)) {
        os << " [style=solid];\n";
      } else {
        os << " [style=dashed, label=" << dot_quote(to_string(e.weight)) << "];\n";
      }
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

/// Dense grid with a header row of target keys and one row per source key.
inline std::string write_matrix_csv(const MatrixEncoding& m) {
  std::string out = "from\\to";
  for (const Key& k : m.col_keys) out += ',' + csv::escape(k.str());
  out += '\n';
  for (std::size_t j = 0; j < m.rows(); ++j) {
    out += csv::escape(m.row_keys[j].str());
    for (std::size_t k = 0; k < m.cols(); ++k) out += ',' + to_string(m.at(j, k));
    out += '\n';
  }
  return out;
}

}  // namespace crossmap

#endif  // CROSSMAP_IO_HPP
