#pragma once

// Edge-colored orthogonality graphs of product-state sets: one vertex per
// state, and each unordered pair carries the list of parties on which the
// two states' locals are orthogonal. Structural classification drives
// protocol synthesis and reporting.

#include "opsd/states.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace opsd {

struct OrthoGraph {
  int n = 0;  // states
  int m = 0;  // parties
  // Every unordered pair (j < k, 0-based) maps to its sorted label list;
  // full orthogonality means no label list is empty.
  std::map<std::pair<int, int>, std::vector<int>> labels;

  bool operator==(const OrthoGraph&) const = default;

  const std::vector<int>& label(int j, int k) const;
  bool has(int j, int k, int party) const;
  // True when (j,k) is orthogonal on `party` and on no other party.
  bool only(int j, int k, int party) const;
};

// Per-party orthogonal-pair counts plus the multiset sorted descending
// (the category key used throughout).
struct RelationVector {
  std::vector<int> counts;
  std::vector<int> canonical;
};

// Throws std::invalid_argument if some pair is orthogonal on no party.
OrthoGraph compute_graph(const StateSet& set);

RelationVector relation_vector(const OrthoGraph& g);

// Isomorphism key under all state relabelings and party permutations;
// equal keys iff the colored graphs are isomorphic.
std::string canonical_form(const OrthoGraph& g);

enum class Pattern {
  IsolatingState,  // some state orthogonal to all others on one party
  Cycle54,         // bipartite, both color classes complementary 5-cycles
  Matching13,      // 4 states, 3 parties, three distinct perfect matchings
  PairBlock,       // two states jointly orthogonal to all others on a party
  SplitEdge,       // an edge admitting a structure-preserving two-way split
  Generic,
};

std::string pattern_name(Pattern p);

struct CaseId {
  RelationVector vector;
  Pattern pattern = Pattern::Generic;
  int party = -1;        // 0-based parameter, -1 when not applicable
  int s = -1, t = -1;    // 0-based state parameters (t unused for
                         // IsolatingState)
};

// Detects patterns in priority order IsolatingState > Cycle54 >
// Matching13 > PairBlock > SplitEdge > Generic, ties broken by ascending
// (party, state) indices. Supports 4- and 5-vertex graphs.
CaseId classify(const OrthoGraph& g);

// Re-checks the claimed pattern directly against the edges.
bool pattern_holds(const OrthoGraph& g, const CaseId& id);

}  // namespace opsd
