#pragma once

#include <string>

#include "caphj/hj_evolve.hpp"

namespace caphj {

/// Named grid functions for problem setup from text configs.
///
/// coefficient a:  "one" | "const:<v>" | "cosa"     (1 + cos(2 pi x)/2)
/// forcing f:      "zero" | "const:<v>" | "sinsq"   (sin^2(pi x) [+ sin^2(pi y)])
///                 | "plateau:<z0>:<z1>"            (min(1, 4 dist(x, [z0,z1])), band in x)
/// datum g:        "zero" | "const:<v>" | "hat"     (min(x,1-x) [+ min(y,1-y)])
///                 | "cos"                          ((1 - cos(2 pi x)) / 4)
///
/// The selector "vstar" for g is resolved by the hj runner (ergodic
/// solution as initial datum) and is not accepted here.
GridFn catalog_fn(const std::string& selector, const TorusGrid& grid);

}  // namespace caphj
