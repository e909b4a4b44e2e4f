#ifndef CROSSMAP_CROSSMAP_HPP
#define CROSSMAP_CROSSMAP_HPP

// Umbrella header.

#include "crossmap/algebra.hpp"
#include "crossmap/core.hpp"
#include "crossmap/error.hpp"
#include "crossmap/extraction.hpp"
#include "crossmap/graph.hpp"
#include "crossmap/io.hpp"
#include "crossmap/process.hpp"
#include "crossmap/rational.hpp"
#include "crossmap/report.hpp"
#include "crossmap/transform.hpp"
#include "crossmap/validation.hpp"

#endif  // CROSSMAP_CROSSMAP_HPP
