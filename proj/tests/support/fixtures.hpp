#ifndef CROSSMAP_TESTS_FIXTURES_HPP
#define CROSSMAP_TESTS_FIXTURES_HPP

// Worked examples shared by the unit and acceptance suites.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "crossmap/crossmap.hpp"

#ifndef CROSSMAP_TEST_DATA_DIR
#error "CROSSMAP_TEST_DATA_DIR must point at tests/data"
#endif

namespace crossmap::testing {

inline std::string data_path(const std::string& name) {
  return std::string(CROSSMAP_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_data(const std::string& name) { return read_text(data_path(name)); }

/// BLX splits evenly into BEL and LUX, the two Germanies merge into DEU and
/// AUS maps to itself.
inline EdgeListDraft country_draft() {
  return EdgeListDraft{{{"BLX", "BEL", parse_rational("0.5")},
                        {"BLX", "LUX", parse_rational("0.5")},
                        {"E.GER", "DEU", Rational(1)},
                        {"W.GER", "DEU", Rational(1)},
                        {"AUS", "AUS", Rational(1)}},
                       std::nullopt};
}

inline Crossmap country_crossmap() { return require_crossmap(country_draft()); }

inline SharedMassArray country_observations() {
  return SharedMassArray{{"BLX", 10}, {"E.GER", 3}, {"W.GER", 4}, {"AUS", 140}};
}

/// Subset of the ANZSCO22 to ISCO08 occupation correspondence: three
/// legislator codes aggregate into 1111, 111212 renames to 0110, and
/// 111111 and 111211 split across overlapping sets of ISCO codes.
inline Crossmap isco_crossmap() { return require_crossmap(read_edge_list(read_data("isco_subset.csv"))); }

inline std::vector<Key> stata_occupation_codes() {
  std::vector<Key> keys;
  std::ifstream in(data_path("stata_occupation_codes.txt"));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) keys.emplace_back(line);
  }
  return keys;
}

/// Group assigned by the STATA occupation script, or nullopt when no rule
/// matches. Mirrors its if-conditions, including the teacher==0 and
/// driver==0 interactions.
inline std::optional<std::string> stata_occupation_group(long occupn) {
  const bool teacher = occupn > 2400 && occupn < 2500;
  const bool driver = (occupn > 8320 && occupn < 8330) || (occupn > 9330 && occupn < 9340);
  if (occupn > 6000 && occupn < 7000) return "farmer";
  if (teacher) return "teacher";
  if (occupn > 2000 && occupn < 3000 && !teacher) return "professional";
  if ((occupn > 1000 && occupn < 1129) || (occupn > 1131 && occupn < 2000)) return "manager";
  if (occupn < 200) return "armforces";
  if (occupn == 1130) return "xefe";
  if (occupn > 3000 && occupn < 5000) return "assprofclerk";
  if ((occupn > 5000 && occupn < 6000) || (occupn > 9000 && occupn < 9200)) return "svcsales";
  if (occupn > 9200 && occupn < 9320) return "labourer";
  if (driver) return "driver";
  if (occupn > 7000 && occupn < 9000 && !driver) return "craftrademach";
  if (occupn > 9990 && occupn < 10000) return "notclass";
  return std::nullopt;
}

/// Sums each occupation's value into its group. Every group named by the
/// script appears in the output, as generated indicator variables would.
inline SharedMassArray stata_occupation_transform(const SharedMassArray& in) {
  std::map<Key, Rational> sums;
  for (const char* g : {"professional", "manager", "teacher", "assprofclerk", "svcsales", "armforces",
                        "xefe", "farmer", "craftrademach", "labourer", "driver", "notclass"}) {
    sums.emplace(Key(g), Rational());
  }
  for (const auto& [key, value] : in.entries()) {
    if (const auto group = stata_occupation_group(std::stol(key.str()))) {
      sums[Key(*group)] += value.value_or(Rational());
    }
  }
  SharedMassArray out;
  for (auto& [k, v] : sums) out.insert(k, v);
  return out;
}

}  // namespace crossmap::testing

#endif  // CROSSMAP_TESTS_FIXTURES_HPP
