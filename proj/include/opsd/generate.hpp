#pragma once

// Random realization of an orthogonality graph: produces a product-state
// set whose computed graph matches a target exactly, with generic
// amplitudes elsewhere. Deterministic for a given seed.

#include "opsd/graph.hpp"
#include "opsd/states.hpp"

#include <cstdint>

namespace opsd {

struct GenerateOptions {
  std::vector<int> dims;  // empty: every party gets dimension 5
  double tol = kDefaultTol;
  int max_retries = 200;  // per local ket
};

// Builds each party's locals in state order: a fresh random unit vector is
// projected onto the orthogonal complement of the locals it must be
// orthogonal to, then rejected if any forbidden pair lands within 10*tol
// of orthogonal. Throws std::runtime_error when the graph is infeasible at
// the given dims (retries exhausted or empty complement).
StateSet generate_from_graph(const OrthoGraph& target, std::uint64_t seed,
                             const GenerateOptions& opts = {});

}  // namespace opsd
