#include "opsd/generate.hpp"

#include <stdexcept>
#include <string>

namespace opsd {

StateSet generate_from_graph(const OrthoGraph& target, std::uint64_t seed,
                             const GenerateOptions& opts) {
  if (target.n < 2 || target.m < 2) {
    throw std::invalid_argument("generate_from_graph: need >= 2 states and parties");
  }
  std::vector<int> dims = opts.dims;
  if (dims.empty()) dims.assign(static_cast<size_t>(target.m), 5);
  if (dims.size() != static_cast<size_t>(target.m)) {
    throw std::invalid_argument("generate_from_graph: dims size mismatch");
  }

  StateSet set;
  set.parties = target.m;
  set.dims = dims;
  set.tol = opts.tol;
  set.states.assign(static_cast<size_t>(target.n),
                    ProductState{std::vector<CVec>(static_cast<size_t>(target.m))});

  std::mt19937_64 rng(seed);
  for (int party = 0; party < target.m; ++party) {
    const int dim = dims[static_cast<size_t>(party)];
    for (int j = 0; j < target.n; ++j) {
      std::vector<CVec> required;  // earlier locals this ket must be orthogonal to
      std::vector<int> forbidden;  // earlier states it must NOT be orthogonal to
      for (int k = 0; k < j; ++k) {
        if (target.has(k, j, party)) {
          required.push_back(set.local(k, party));
        } else {
          forbidden.push_back(k);
        }
      }
      const CMat keep =
          CMat::Identity(dim, dim) - span_projector(required, dim, opts.tol);

      bool placed = false;
      for (int attempt = 0; attempt < opts.max_retries && !placed; ++attempt) {
        const CVec draw = keep * random_unit_vector(rng, dim);
        if (draw.norm() <= 0.1) continue;  // degenerate projection, redraw
        const CVec candidate = draw / draw.norm();
        bool ok = true;
        for (int k : forbidden) {
          if (std::abs(inner(set.local(k, party), candidate)) <
              10.0 * opts.tol) {
            ok = false;
            break;
          }
        }
        if (ok) {
          set.states[static_cast<size_t>(j)].locals[static_cast<size_t>(party)] =
              candidate;
          placed = true;
        }
      }
      if (!placed) {
        throw std::runtime_error(
            "generate_from_graph: no realization for state " +
            std::to_string(j + 1) + " party " + std::to_string(party + 1) +
            " (dims too small or graph infeasible)");
      }
    }
  }

  if (compute_graph(set) != target) {
    throw std::runtime_error(
        "generate_from_graph: realized graph mismatch (internal)");
  }
  return set;
}

}  // namespace opsd
