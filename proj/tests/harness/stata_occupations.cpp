// Test harness reproducing the occupation grouping script: reads an array of
// occupation codes on standard input and writes group totals.

#include <iostream>

#include "crossmap/crossmap.hpp"
#include "support/fixtures.hpp"

int main() {
  try {
    const auto input = crossmap::read_array(crossmap::read_text("-"));
    std::cout << crossmap::write_array(crossmap::testing::stata_occupation_transform(input));
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
