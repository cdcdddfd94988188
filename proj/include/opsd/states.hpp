#pragma once

// Multipartite product states and the families of five-state sets the
// toolkit ships: a two-parameter-per-party bipartite "double cycle" family
// (every state orthogonal to every other on exactly one party, the two
// orthogonality classes forming complementary 5-cycles) and a pair of
// fixed tripartite sets sharing one orthogonality graph but with opposite
// local distinguishability.

#include "opsd/linalg.hpp"

#include <string>
#include <vector>

namespace opsd {

// One pure product state: a normalized local ket per party.
struct ProductState {
  std::vector<CVec> locals;
};

// A finite set of pairwise fully orthogonal product states on a shared
// multipartite space. Constructors in this module guarantee the
// orthogonality invariant; use validate() on externally supplied data.
struct StateSet {
  int parties = 0;
  std::vector<int> dims;
  std::vector<ProductState> states;
  double tol = kDefaultTol;

  int size() const { return static_cast<int>(states.size()); }
  const CVec& local(int state, int party) const {
    return states[static_cast<size_t>(state)].locals[static_cast<size_t>(party)];
  }
};

// <s|t> = product of the per-party inner products.
cplx product_inner(const ProductState& s, const ProductState& t);

struct PairReport {
  int j = 0, k = 0;                     // 0-based state indices, j < k
  std::vector<int> orthogonal_parties;  // parties with |<.|.>| <= tol
  cplx product;                         // full product inner value
};

struct ValidationReport {
  bool fully_orthogonal = true;  // every pair orthogonal on >= 1 party
  bool unique_party = true;      // every pair orthogonal on exactly 1 party
  std::vector<PairReport> pairs;
  std::vector<std::pair<int, int>> violations;  // non-orthogonal pairs
};

// Structural checks (dims, normalization) throw std::invalid_argument;
// orthogonality findings go into the report.
ValidationReport validate(const StateSet& set);

// rank of {party-local kets of all states} (numerical, via the Gram
// matrix).
int local_rank(const StateSet& set, int party);

// perm maps new index -> old index; both helpers preserve tol.
StateSet permute_states(const StateSet& set, const std::vector<int>& perm);
StateSet permute_parties(const StateSet& set, const std::vector<int>& perm);

// Parameters of the bipartite double-cycle family. Unprimed letters shape
// party 1, primed ("p") letters party 2. The derived coefficients c and e
// (and their primes) are forced by orthogonality:
//   c = -1 / conj(a),   e = a (conj(b) + conj(d) g).
// Validity requires a, b, ap, bp nonzero and the derived e, ep nonzero.
struct FamilyParams {
  cplx a{1.0}, b{1.0}, d{0.0}, g{0.0}, h{0.0};
  cplx ap{1.0}, bp{1.0}, dp{0.0}, gp{0.0}, hp{0.0};

  cplx c() const { return -1.0 / std::conj(a); }
  cplx e() const { return a * (std::conj(b) + std::conj(d) * g); }
  cplx cp() const { return -1.0 / std::conj(ap); }
  cplx ep() const { return ap * (std::conj(bp) + std::conj(dp) * gp); }
};

// The five-state bipartite family. Party spaces are sized to the highest
// basis index actually used (5 with the h term, 4 with d or g, else 3).
// Party-1 orthogonal pairs are always {(1,4),(1,5),(2,3),(2,5),(3,4)}
// (1-based), party-2 pairs the complementary five; each class is a
// 5-cycle. Throws std::invalid_argument on parameter violations.
StateSet cycle_family(const FamilyParams& p);

// d = g = h = 0 specialization (3-dimensional party spaces); locally
// indistinguishable for every valid choice of parameters.
StateSet cycle_family_basic(cplx a, cplx b, cplx ap, cplx bp);

// Fixed tripartite five-state set, relation vector (5,3,2), that admits
// no informative orthogonality-preserving local measurement on any party.
StateSet tripartite_indistinguishable_set();

// Fixed tripartite five-state set with the same orthogonality graph as
// tripartite_indistinguishable_set() but perfectly distinguishable by
// LOCC (first step: the four-outcome sign split on party 3).
StateSet tripartite_distinguishable_set();

}  // namespace opsd
