// Re-express country observations recorded under historical borders in
// present-day countries.
//
//   harmonise_countries <edges.csv> <observations.csv>

#include <iostream>

#include "crossmap/crossmap.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: harmonise_countries <edges.csv> <observations.csv>\n";
    return 2;
  }
  try {
    const auto built = crossmap::build_crossmap(crossmap::read_edge_list(crossmap::read_text(argv[1])));
    if (!built) {
      std::cerr << crossmap::render_text(built.report);
      return 1;
    }
    const auto observations = crossmap::read_array(crossmap::read_text(argv[2]));

    const auto coverage = crossmap::check_coverage(*built, observations);
    if (!coverage.conformable) {
      std::cerr << "not covered: " << crossmap::join_keys(coverage.uncovered_keys, 10) << " ("
                << coverage.mass_at_risk << " at risk)\n";
      return 1;
    }

    const auto result = crossmap::apply_transform(*built, observations);
    std::cout << crossmap::write_array(result.output);
    std::cerr << crossmap::render_text(result.receipt);
  } catch (const crossmap::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
