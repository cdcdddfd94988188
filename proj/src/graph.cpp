#include "opsd/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace opsd {

namespace {

std::pair<int, int> ordered(int j, int k) {
  return j < k ? std::make_pair(j, k) : std::make_pair(k, j);
}

// All vertices reachable from 0 using the given edge set.
bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> seen(static_cast<size_t>(n), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : edges) {
      const int other = a == v ? b : (b == v ? a : -1);
      if (other >= 0 && !seen[static_cast<size_t>(other)]) {
        seen[static_cast<size_t>(other)] = 1;
        stack.push_back(other);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace

const std::vector<int>& OrthoGraph::label(int j, int k) const {
  const auto it = labels.find(ordered(j, k));
  if (it == labels.end()) {
    throw std::invalid_argument("OrthoGraph: pair not present");
  }
  return it->second;
}

bool OrthoGraph::has(int j, int k, int party) const {
  const std::vector<int>& l = label(j, k);
  return std::find(l.begin(), l.end(), party) != l.end();
}

bool OrthoGraph::only(int j, int k, int party) const {
  const std::vector<int>& l = label(j, k);
  return l.size() == 1 && l[0] == party;
}

OrthoGraph compute_graph(const StateSet& set) {
  OrthoGraph g;
  g.n = set.size();
  g.m = set.parties;
  for (int j = 0; j < g.n; ++j) {
    for (int k = j + 1; k < g.n; ++k) {
      std::vector<int> label;
      for (int i = 0; i < g.m; ++i) {
        if (std::abs(inner(set.local(j, i), set.local(k, i))) <= set.tol) {
          label.push_back(i);
        }
      }
      if (label.empty()) {
        throw std::invalid_argument(
            "compute_graph: states " + std::to_string(j + 1) + " and " +
            std::to_string(k + 1) + " are not orthogonal on any party");
      }
      g.labels[{j, k}] = std::move(label);
    }
  }
  return g;
}

RelationVector relation_vector(const OrthoGraph& g) {
  RelationVector rv;
  rv.counts.assign(static_cast<size_t>(g.m), 0);
  for (const auto& [pair, label] : g.labels) {
    (void)pair;
    for (int party : label) ++rv.counts[static_cast<size_t>(party)];
  }
  rv.canonical = rv.counts;
  std::sort(rv.canonical.rbegin(), rv.canonical.rend());
  return rv;
}

std::string canonical_form(const OrthoGraph& g) {
  std::vector<int> vperm(static_cast<size_t>(g.n));
  std::iota(vperm.begin(), vperm.end(), 0);
  std::vector<int> pperm(static_cast<size_t>(g.m));
  std::iota(pperm.begin(), pperm.end(), 0);

  std::string best;
  std::vector<int> vp = vperm;
  do {
    std::vector<int> pp = pperm;
    do {
      // Flattened label bitmasks over relabeled pairs, lexicographic order.
      std::string key;
      key.reserve(static_cast<size_t>(g.n * (g.n - 1) / 2));
      for (int j = 0; j < g.n; ++j) {
        for (int k = j + 1; k < g.n; ++k) {
          int mask = 0;
          for (int i = 0; i < g.m; ++i) {
            if (g.has(vp[static_cast<size_t>(j)], vp[static_cast<size_t>(k)],
                      pp[static_cast<size_t>(i)])) {
              mask |= 1 << i;
            }
          }
          key.push_back(static_cast<char>('0' + mask));
        }
      }
      if (best.empty() || key < best) best = key;
    } while (std::next_permutation(pp.begin(), pp.end()));
  } while (std::next_permutation(vp.begin(), vp.end()));

  return "n" + std::to_string(g.n) + "m" + std::to_string(g.m) + ":" + best;
}

std::string pattern_name(Pattern p) {
  switch (p) {
    case Pattern::IsolatingState: return "IsolatingState";
    case Pattern::Cycle54: return "Cycle54";
    case Pattern::Matching13: return "Matching13";
    case Pattern::PairBlock: return "PairBlock";
    case Pattern::SplitEdge: return "SplitEdge";
    case Pattern::Generic: return "Generic";
  }
  return "Generic";
}

namespace {

bool is_isolating(const OrthoGraph& g, int party, int s) {
  for (int k = 0; k < g.n; ++k) {
    if (k != s && !g.has(s, k, party)) return false;
  }
  return true;
}

// Both color classes are 5-cycles partitioning the 10 pairs.
bool is_cycle54(const OrthoGraph& g) {
  if (g.n != 5 || g.m != 2) return false;
  for (int party = 0; party < 2; ++party) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(5, 0);
    for (const auto& [pair, label] : g.labels) {
      if (label.size() != 1) return false;  // unique-party premise
      if (label[0] == party) {
        edges.push_back(pair);
        ++degree[static_cast<size_t>(pair.first)];
        ++degree[static_cast<size_t>(pair.second)];
      }
    }
    if (edges.size() != 5) return false;
    if (!std::all_of(degree.begin(), degree.end(),
                     [](int d) { return d == 2; })) {
      return false;
    }
    if (!connected(5, edges)) return false;
  }
  return true;
}

// Three distinct perfect matchings on 4 vertices, one per party.
bool is_matching13(const OrthoGraph& g) {
  if (g.n != 4 || g.m != 3) return false;
  for (int party = 0; party < 3; ++party) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(4, 0);
    for (const auto& [pair, label] : g.labels) {
      if (label.size() != 1) return false;
      if (label[0] == party) {
        edges.push_back(pair);
        ++degree[static_cast<size_t>(pair.first)];
        ++degree[static_cast<size_t>(pair.second)];
      }
    }
    if (edges.size() != 2) return false;
    if (!std::all_of(degree.begin(), degree.end(),
                     [](int d) { return d == 1; })) {
      return false;
    }
  }
  return true;
}

bool is_pair_block(const OrthoGraph& g, int party, int s, int t) {
  for (int k = 0; k < g.n; ++k) {
    if (k == s || k == t) continue;
    if (!g.has(s, k, party) || !g.has(t, k, party)) return false;
  }
  return true;
}

// A projective split along edge (s,t) on `party`, collapsing onto state
// t's local, keeps the remaining structure discriminable:
//  - outcome "onto t": survivors are t plus the states not orthogonal to
//    t on this party; no surviving pair other than those involving t may
//    rely on this party alone;
//  - outcome "away from t": everyone but t survives; a pair relying on
//    this party alone stays orthogonal only when one member is orthogonal
//    to t here (the cross term then vanishes).
bool is_split_edge(const OrthoGraph& g, int party, int s, int t) {
  if (!g.has(s, t, party)) return false;
  std::vector<int> survivors;
  for (int u = 0; u < g.n; ++u) {
    if (u == t || !g.has(t, u, party)) survivors.push_back(u);
  }
  for (size_t x = 0; x < survivors.size(); ++x) {
    for (size_t y = x + 1; y < survivors.size(); ++y) {
      const int u = survivors[x], v = survivors[y];
      if (u == t || v == t) continue;
      if (g.only(u, v, party)) return false;
    }
  }
  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      if (u == t || v == t) continue;
      if (g.only(u, v, party) && !g.has(t, u, party) && !g.has(t, v, party)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

CaseId classify(const OrthoGraph& g) {
  if (g.n != 4 && g.n != 5) {
    throw std::invalid_argument("classify: supports 4- or 5-vertex graphs");
  }
  CaseId id;
  id.vector = relation_vector(g);

  for (int party = 0; party < g.m; ++party) {
    for (int s = 0; s < g.n; ++s) {
      if (is_isolating(g, party, s)) {
        id.pattern = Pattern::IsolatingState;
        id.party = party;
        id.s = s;
        return id;
      }
    }
  }
  if (is_cycle54(g)) {
    id.pattern = Pattern::Cycle54;
    return id;
  }
  if (is_matching13(g)) {
    id.pattern = Pattern::Matching13;
    return id;
  }
  for (int party = 0; party < g.m; ++party) {
    for (int s = 0; s < g.n; ++s) {
      for (int t = s + 1; t < g.n; ++t) {
        if (is_pair_block(g, party, s, t)) {
          id.pattern = Pattern::PairBlock;
          id.party = party;
          id.s = s;
          id.t = t;
          return id;
        }
      }
    }
  }
  for (int party = 0; party < g.m; ++party) {
    for (int s = 0; s < g.n; ++s) {
      for (int t = 0; t < g.n; ++t) {
        if (s == t || s > t) continue;
        if (is_split_edge(g, party, s, t) || is_split_edge(g, party, t, s)) {
          id.pattern = Pattern::SplitEdge;
          id.party = party;
          id.s = s;
          id.t = t;
          return id;
        }
      }
    }
  }
  id.pattern = Pattern::Generic;
  return id;
}

bool pattern_holds(const OrthoGraph& g, const CaseId& id) {
  switch (id.pattern) {
    case Pattern::IsolatingState:
      return is_isolating(g, id.party, id.s);
    case Pattern::Cycle54:
      return is_cycle54(g);
    case Pattern::Matching13:
      return is_matching13(g);
    case Pattern::PairBlock:
      return is_pair_block(g, id.party, id.s, id.t);
    case Pattern::SplitEdge:
      return is_split_edge(g, id.party, id.s, id.t) ||
             is_split_edge(g, id.party, id.t, id.s);
    case Pattern::Generic:
      return true;
  }
  return false;
}

}  // namespace opsd
