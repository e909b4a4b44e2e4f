// crossmap: command-line front end for validating, applying, composing,
// analysing and extracting crossmaps.
//
// Exit status: 0 success, 1 validation or coverage failure, 2 usage or I/O
// error, 3 probe failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "crossmap/crossmap.hpp"

namespace {

using crossmap::json;

enum ExitStatus { kOk = 0, kValidationFailure = 1, kUsageError = 2, kProbeFailure = 3 };

/// Ends the current subcommand with a status and a machine-readable detail.
struct Failure {
  int status;
  std::string message;
  json detail;
};

struct Session {
  bool json_mode = false;
  bool decimal_weights = false;
  std::string provenance_path;
  std::vector<std::string> argv;
  json inputs = json::array();
  json result = json::object();

  crossmap::WeightStyle style() const {
    return decimal_weights ? crossmap::WeightStyle::decimal : crossmap::WeightStyle::fraction;
  }
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    return "";
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string read_input(Session& session, const std::string& path) {
  std::string text;
  try {
    text = crossmap::read_text(path);
  } catch (const crossmap::Error& e) {
    throw Failure{kUsageError, e.what(), json{{"error", "io"}, {"path", path}}};
  }
  session.inputs.push_back(json{{"path", path}, {"sha256", sha256_hex(text)}});
  return text;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Failure{kUsageError, "cannot write '" + path + "'", json{{"error", "io"}, {"path", path}}};
  }
}

Failure parse_failure(const std::string& path, const crossmap::ParseError& e) {
  return Failure{kValidationFailure, path + ": " + e.what(),
                 json{{"error", "parse"}, {"path", path}, {"line", e.line()}, {"message", e.what()}}};
}

crossmap::Crossmap load_crossmap(Session& session, const std::string& path) {
  const std::string text = read_input(session, path);
  crossmap::EdgeListDraft draft;
  try {
    draft = crossmap::read_edge_list(text);
  } catch (const crossmap::ParseError& e) {
    throw parse_failure(path, e);
  }
  auto built = crossmap::build_crossmap(draft);
  if (!built) {
    throw Failure{kValidationFailure, path + ": invalid crossmap",
                  json{{"error", "invalid_crossmap"}, {"path", path},
                       {"report", crossmap::to_json(built.report)}}};
  }
  return std::move(*built.value);
}

crossmap::SharedMassArray load_array(Session& session, const std::string& path) {
  const std::string text = read_input(session, path);
  try {
    return crossmap::read_array(text);
  } catch (const crossmap::ParseError& e) {
    throw parse_failure(path, e);
  }
}

void print_stderr(const Session& session, const std::string& text, const json& doc) {
  if (session.json_mode) {
    std::cerr << doc.dump(2) << '\n';
  } else {
    std::cerr << text;
  }
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string edges;
};

void run_validate(Session& s, const ValidateArgs& a) {
  const std::string text = read_input(s, a.edges);
  crossmap::EdgeListDraft draft;
  try {
    draft = crossmap::read_edge_list(text);
  } catch (const crossmap::ParseError& e) {
    throw parse_failure(a.edges, e);
  }
  const auto report = crossmap::check_mass_preserving(draft);
  const json doc = crossmap::to_json(report);
  s.result = doc;
  write_output("", s.json_mode ? doc.dump(2) + "\n" : crossmap::render_text(report));
  if (!report.ok()) {
    throw Failure{kValidationFailure, a.edges + ": mass-preserving condition violated",
                  json{{"error", "invalid_crossmap"}, {"path", a.edges}, {"report", doc}}};
  }
}

struct ApplyArgs {
  std::string map;
  std::string data;
  std::string out;
  bool drop_uncovered = false;
  bool drop_zeros = false;
  bool strict_positive = false;
};

void run_apply(Session& s, const ApplyArgs& a) {
  const crossmap::Crossmap map = load_crossmap(s, a.map);
  const crossmap::SharedMassArray data = load_array(s, a.data);

  const auto findings = crossmap::check_array(
      data, a.strict_positive ? crossmap::ZeroPolicy::strict_positive : crossmap::ZeroPolicy::allow_zero);
  if (!findings.empty()) {
    throw Failure{kValidationFailure, findings.front().message,
                  json{{"error", "invalid_array"}, {"path", a.data},
                       {"findings", crossmap::to_json(findings)}}};
  }

  crossmap::TransformOptions opts;
  opts.emit_zero_targets = !a.drop_zeros;
  opts.on_uncovered = a.drop_uncovered ? crossmap::UncoveredPolicy::drop_and_report
                                       : crossmap::UncoveredPolicy::error;
  crossmap::TransformResult result;
  try {
    result = crossmap::apply_transform(map, data, opts);
  } catch (const crossmap::CoverageError& e) {
    json cov = crossmap::to_json(e.report());
    cov["error"] = "coverage";
    throw Failure{kValidationFailure, e.what(), cov};
  }

  const auto& r = result.receipt;
  s.result = crossmap::to_json(r);
  if (r.input_total != r.output_total + r.dropped_mass) {
    throw Failure{kValidationFailure, "mass not conserved",
                  json{{"error", "mass_not_conserved"}, {"receipt", s.result}}};
  }
  write_output(a.out, crossmap::write_array(result.output, s.style()));
  print_stderr(s, crossmap::render_text(r), json{{"receipt", s.result}});
}

struct ComposeArgs {
  std::vector<std::string> maps;
  std::string out;
};

void run_compose(Session& s, const ComposeArgs& a) {
  std::vector<crossmap::Crossmap> chain;
  for (const auto& path : a.maps) chain.push_back(load_crossmap(s, path));
  try {
    const auto composed = crossmap::compose_all(chain);
    s.result = json{{"edges", composed.edges().size()}};
    write_output(a.out, crossmap::write_edge_list(composed, s.style()));
  } catch (const crossmap::CoverageError& e) {
    json cov = crossmap::to_json(e.report());
    cov["error"] = "chain_coverage";
    cov["step"] = e.step();
    cov["path"] = a.maps[e.step() - 1];
    throw Failure{kValidationFailure, e.what(), cov};
  }
}

struct SingleMapArgs {
  std::string edges;
  std::string out;
};

void run_reverse(Session& s, const SingleMapArgs& a) {
  const auto map = load_crossmap(s, a.edges);
  const auto reversed = crossmap::reverse(map);
  if (!reversed) {
    throw Failure{kValidationFailure, crossmap::render_text(reversed.report),
                  json{{"error", "not_reversible"}, {"report", crossmap::to_json(reversed.report)}}};
  }
  write_output(a.out, crossmap::write_edge_list(*reversed, s.style()));
}

void run_classify(Session& s, const SingleMapArgs& a) {
  const auto comps = crossmap::components(load_crossmap(s, a.edges));
  const json doc = crossmap::to_json(comps);
  s.result = doc["component_type_counts"];
  write_output(a.out, s.json_mode ? doc.dump(2) + "\n" : crossmap::render_text(comps));
}

struct SummarizeArgs {
  std::string edges;
  std::string data;
  std::string out;
};

void run_summarize(Session& s, const SummarizeArgs& a) {
  const auto map = load_crossmap(s, a.edges);
  const auto summary = crossmap::summarize(map);
  crossmap::ImputationMetrics metrics;
  if (a.data.empty()) {
    metrics = crossmap::imputation_metrics(map);
  } else {
    const auto data = load_array(s, a.data);
    try {
      metrics = crossmap::imputation_metrics(map, data);
    } catch (const crossmap::CoverageError& e) {
      json cov = crossmap::to_json(e.report());
      cov["error"] = "coverage";
      throw Failure{kValidationFailure, e.what(), cov};
    } catch (const crossmap::ArrayError& e) {
      throw Failure{kValidationFailure, e.what(),
                    json{{"error", "invalid_array"}, {"findings", crossmap::to_json(e.findings())}}};
    }
  }
  const json doc{{"summary", crossmap::to_json(summary)},
                 {"imputation", crossmap::to_json(metrics)}};
  s.result = doc["imputation"];
  write_output(a.out, s.json_mode ? doc.dump(2) + "\n"
                                  : crossmap::render_text(summary) + "\n" +
                                        crossmap::render_text(metrics));
}

struct ExtractArgs {
  std::string cmd;
  std::string keys;
  std::string tolerance = "1e-9";
  std::optional<std::int64_t> max_den;
  std::size_t jobs = 1;
  std::string out;
};

void run_extract(Session& s, const ExtractArgs& a) {
  std::vector<crossmap::Key> keys;
  {
    std::istringstream in(read_input(s, a.keys));
    std::string line;
    while (std::getline(in, line)) {
      if (!crossmap::detail::trim(line).empty()) keys.emplace_back(line);
    }
  }
  if (keys.empty()) {
    throw Failure{kUsageError, a.keys + ": no keys", json{{"error", "usage"}, {"path", a.keys}}};
  }
  crossmap::ProbeOptions opts;
  try {
    opts.tolerance = crossmap::parse_rational(a.tolerance);
  } catch (const crossmap::ParseError& e) {
    throw Failure{kUsageError, e.what(), json{{"error", "usage"}, {"option", "--tolerance"}}};
  }
  opts.rationalize_max_denominator = a.max_den;
  opts.jobs = a.jobs;

  crossmap::ExtractionResult result;
  try {
    result = crossmap::probe_blackbox(crossmap::BlackboxTransform::external_command(a.cmd), keys, opts);
  } catch (const crossmap::ProbeError& e) {
    throw Failure{kProbeFailure, e.what(), json{{"error", "probe"}, {"message", e.what()}}};
  }
  const json doc = crossmap::to_json(result);
  s.result = json{{"extracted", doc["extracted"]}, {"probes_sent", doc["probes_sent"]}};
  if (!result.crossmap) {
    throw Failure{kValidationFailure, "extracted weights do not form a valid crossmap", doc};
  }
  write_output(a.out, crossmap::write_edge_list(*result.crossmap, s.style()));
  print_stderr(s,
               "extracted " + std::to_string(result.crossmap->edges().size()) + " edges from " +
                   std::to_string(result.probes_sent) + " probes\n",
               json{{"extraction", s.result}});
}

struct ImportArgs {
  std::string crosswalk;
  bool equal_split = false;
  std::string out;
};

void run_import(Session& s, const ImportArgs& a) {
  const std::string text = read_input(s, a.crosswalk);
  crossmap::Crosswalk cw;
  try {
    cw = crossmap::read_crosswalk(text);
  } catch (const crossmap::ParseError& e) {
    throw parse_failure(a.crosswalk, e);
  }
  const auto imported = crossmap::import_crosswalk(
      cw, a.equal_split ? crossmap::SplitPolicy::equal_split : crossmap::SplitPolicy::reject_splits);
  const json report = crossmap::to_json(imported.report);
  s.result = report;
  if (!imported) {
    throw Failure{kValidationFailure, crossmap::render_text(imported.report),
                  json{{"error", "split_sources"}, {"report", report}}};
  }
  write_output(a.out, crossmap::write_edge_list(*imported, s.style()));
  if (!imported.report.findings.empty()) {
    print_stderr(s, crossmap::render_text(imported.report), report);
  }
}

void run_export_dot(Session& s, const SingleMapArgs& a) {
  write_output(a.out, crossmap::export_dot(load_crossmap(s, a.edges)));
}

void run_export_matrix(Session& s, const SingleMapArgs& a) {
  write_output(a.out, crossmap::write_matrix_csv(crossmap::to_matrix(load_crossmap(s, a.edges))));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append_provenance(const Session& s, const std::string& command, int status) {
  if (s.provenance_path.empty()) return;
  const json record{{"command", command},
                    {"arguments", s.argv},
                    {"inputs", s.inputs},
                    {"result", s.result},
                    {"exit_status", status},
                    {"timestamp", utc_timestamp()}};
  std::ofstream out(s.provenance_path, std::ios::app);
  out << record.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Session session;
  session.argv.assign(argv + 1, argv + argc);

  CLI::App app{"crossmap: mass-preserving mappings between classifications"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", session.json_mode, "Machine-readable JSON reports");
  app.add_flag("--decimal-weights", session.decimal_weights,
               "Write terminating weights as decimals instead of p/q");
  app.add_option("--provenance", session.provenance_path,
                 "Append a JSON provenance record to this file");

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check the mass-preserving condition of an edge list");
  validate->add_option("edges", validate_args.edges, "Edge-list CSV (from,to,weight)")->required();

  ApplyArgs apply_args;
  auto* apply = app.add_subcommand("apply", "Transform a shared mass array with a crossmap");
  apply->add_option("--map", apply_args.map, "Edge-list CSV")->required();
  apply->add_option("--data", apply_args.data, "Array CSV (key,value)")->required();
  apply->add_option("--out", apply_args.out, "Output array CSV (default: stdout)");
  apply->add_flag("--drop-uncovered", apply_args.drop_uncovered,
                  "Drop keys the crossmap does not cover and report the dropped mass");
  apply->add_flag("--drop-zeros", apply_args.drop_zeros, "Omit targets that receive zero mass");
  apply->add_flag("--strict-positive", apply_args.strict_positive, "Reject zero input values");

  ComposeArgs compose_args;
  auto* compose = app.add_subcommand("compose", "Compose a chain of crossmaps into one");
  compose->add_option("maps", compose_args.maps, "Edge-list CSVs, applied left to right")
      ->required()
      ->expected(2, -1);
  compose->add_option("--out", compose_args.out, "Output edge list (default: stdout)");

  SingleMapArgs reverse_args;
  auto* reverse = app.add_subcommand("reverse", "Reverse a crossmap when the reversal is mass-preserving");
  reverse->add_option("edges", reverse_args.edges, "Edge-list CSV")->required();
  reverse->add_option("--out", reverse_args.out, "Output edge list (default: stdout)");

  SingleMapArgs classify_args;
  auto* classify = app.add_subcommand("classify", "List components and their relation types");
  classify->add_option("edges", classify_args.edges, "Edge-list CSV")->required();
  classify->add_option("--out", classify_args.out, "Output file (default: stdout)");

  SummarizeArgs summarize_args;
  auto* summarize = app.add_subcommand("summarize", "Per-target summary and imputation metrics");
  summarize->add_option("edges", summarize_args.edges, "Edge-list CSV")->required();
  summarize->add_option("--data", summarize_args.data, "Array CSV for data-dependent metrics");
  summarize->add_option("--out", summarize_args.out, "Output file (default: stdout)");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Recover the crossmap of a command by probing it");
  extract->add_option("--cmd", extract_args.cmd, "Shell command: array CSV on stdin, array CSV on stdout")
      ->required();
  extract->add_option("--keys", extract_args.keys, "Source keys, one per line")->required();
  extract->add_option("--tolerance", extract_args.tolerance, "Allowed |total - 1| per source")
      ->capture_default_str();
  extract->add_option("--rationalize-max-den", extract_args.max_den,
                      "Snap weights to fractions with denominators up to N");
  extract->add_option("--jobs", extract_args.jobs, "Concurrent probes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  extract->add_option("--out", extract_args.out, "Output edge list (default: stdout)");

  ImportArgs import_args;
  auto* import = app.add_subcommand("import-crosswalk", "Convert a from,to crosswalk into a crossmap");
  import->add_option("crosswalk", import_args.crosswalk, "Crosswalk CSV (from,to)")->required();
  import->add_flag("--equal-split", import_args.equal_split,
                   "Split one-to-many sources equally instead of rejecting them");
  import->add_option("--out", import_args.out, "Output edge list (default: stdout)");

  SingleMapArgs dot_args;
  auto* dot = app.add_subcommand("export-dot", "Write a Graphviz rendering of a crossmap");
  dot->add_option("edges", dot_args.edges, "Edge-list CSV")->required();
  dot->add_option("--out", dot_args.out, "Output DOT file (default: stdout)");

  SingleMapArgs matrix_args;
  auto* matrix = app.add_subcommand("export-matrix", "Write the dense weight matrix as CSV");
  matrix->add_option("edges", matrix_args.edges, "Edge-list CSV")->required();
  matrix->add_option("--out", matrix_args.out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  int status = kOk;
  try {
    if (*validate) run_validate(session, validate_args);
    else if (*apply) run_apply(session, apply_args);
    else if (*compose) run_compose(session, compose_args);
    else if (*reverse) run_reverse(session, reverse_args);
    else if (*classify) run_classify(session, classify_args);
    else if (*summarize) run_summarize(session, summarize_args);
    else if (*extract) run_extract(session, extract_args);
    else if (*import) run_import(session, import_args);
    else if (*dot) run_export_dot(session, dot_args);
    else if (*matrix) run_export_matrix(session, matrix_args);
  } catch (const Failure& f) {
    status = f.status;
    json doc = f.detail;
    doc["status"] = f.status;
    if (!doc.contains("message")) doc["message"] = f.message;
    session.result["failure"] = doc;
    std::string text = "error: " + f.message;
    if (text.back() != '\n') text += '\n';
    print_stderr(session, text, doc);
  } catch (const std::exception& e) {
    status = kUsageError;
    print_stderr(session, std::string("error: ") + e.what() + "\n",
                 json{{"status", status}, {"error", "internal"}, {"message", e.what()}});
  }
  append_provenance(session, command, status);
  return status;
}
