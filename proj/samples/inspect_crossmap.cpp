// Print the components of a crossmap, how much it can impute, and whether it
// can be run backwards.

#include <iostream>

#include "crossmap/crossmap.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: inspect_crossmap <edges.csv>\n";
    return 2;
  }
  try {
    const auto map = crossmap::require_crossmap(crossmap::read_edge_list(crossmap::read_text(argv[1])));
    std::cout << crossmap::render_text(crossmap::components(map)) << '\n'
              << crossmap::render_text(crossmap::imputation_metrics(map)) << '\n';

    const auto reversed = crossmap::reverse(map);
    if (reversed) {
      std::cout << "reversible:\n" << crossmap::write_edge_list(*reversed);
    } else {
      std::cout << "not reversible:\n" << crossmap::render_text(reversed.report);
    }
  } catch (const crossmap::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
