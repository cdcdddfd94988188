#include "opsd/states.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace opsd {

namespace {

// Ket from the first `dim` coefficients; nonzero coefficients beyond dim
// indicate an internal sizing bug.
CVec truncated_ket(const std::array<cplx, 5>& coeff, int dim) {
  CVec v = CVec::Zero(dim);
  for (int i = 0; i < 5; ++i) {
    if (i < dim) {
      v(i) = coeff[static_cast<size_t>(i)];
    } else if (std::abs(coeff[static_cast<size_t>(i)]) != 0.0) {
      throw std::logic_error("family ket uses an index beyond the party dim");
    }
  }
  return normalized(v);
}

bool nonzero(const cplx& z, double tol) { return std::abs(z) > tol; }

}  // namespace

cplx product_inner(const ProductState& s, const ProductState& t) {
  if (s.locals.size() != t.locals.size()) {
    throw std::invalid_argument("product_inner: party count mismatch");
  }
  cplx prod = 1.0;
  for (size_t i = 0; i < s.locals.size(); ++i) {
    prod *= inner(s.locals[i], t.locals[i]);
  }
  return prod;
}

ValidationReport validate(const StateSet& set) {
  if (set.parties <= 0 ||
      set.dims.size() != static_cast<size_t>(set.parties)) {
    throw std::invalid_argument("validate: dims must list one entry per party");
  }
  for (int j = 0; j < set.size(); ++j) {
    const ProductState& s = set.states[static_cast<size_t>(j)];
    if (s.locals.size() != static_cast<size_t>(set.parties)) {
      throw std::invalid_argument("validate: state " + std::to_string(j + 1) +
                                  " has the wrong party count");
    }
    for (int i = 0; i < set.parties; ++i) {
      if (s.locals[static_cast<size_t>(i)].size() !=
          set.dims[static_cast<size_t>(i)]) {
        throw std::invalid_argument("validate: state " + std::to_string(j + 1) +
                                    " party " + std::to_string(i + 1) +
                                    " dimension mismatch");
      }
      if (std::abs(s.locals[static_cast<size_t>(i)].norm() - 1.0) >
          1e3 * set.tol) {
        throw std::invalid_argument("validate: state " + std::to_string(j + 1) +
                                    " party " + std::to_string(i + 1) +
                                    " local ket not normalized");
      }
    }
  }

  ValidationReport report;
  for (int j = 0; j < set.size(); ++j) {
    for (int k = j + 1; k < set.size(); ++k) {
      PairReport pair;
      pair.j = j;
      pair.k = k;
      pair.product = 1.0;
      for (int i = 0; i < set.parties; ++i) {
        const cplx ip = inner(set.local(j, i), set.local(k, i));
        pair.product *= ip;
        if (std::abs(ip) <= set.tol) pair.orthogonal_parties.push_back(i);
      }
      if (pair.orthogonal_parties.empty()) {
        report.fully_orthogonal = false;
        report.violations.emplace_back(j, k);
      }
      if (pair.orthogonal_parties.size() != 1) report.unique_party = false;
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

int local_rank(const StateSet& set, int party) {
  if (party < 0 || party >= set.parties) {
    throw std::invalid_argument("local_rank: party out of range");
  }
  std::vector<CVec> locals;
  locals.reserve(static_cast<size_t>(set.size()));
  for (int j = 0; j < set.size(); ++j) locals.push_back(set.local(j, party));
  return rank_of(locals, set.tol);
}

StateSet permute_states(const StateSet& set, const std::vector<int>& perm) {
  if (perm.size() != static_cast<size_t>(set.size())) {
    throw std::invalid_argument("permute_states: permutation size mismatch");
  }
  StateSet out = set;
  for (size_t i = 0; i < perm.size(); ++i) {
    out.states[i] = set.states[static_cast<size_t>(perm[i])];
  }
  return out;
}

StateSet permute_parties(const StateSet& set, const std::vector<int>& perm) {
  if (perm.size() != static_cast<size_t>(set.parties)) {
    throw std::invalid_argument("permute_parties: permutation size mismatch");
  }
  StateSet out = set;
  for (size_t i = 0; i < perm.size(); ++i) {
    out.dims[i] = set.dims[static_cast<size_t>(perm[i])];
  }
  for (int j = 0; j < set.size(); ++j) {
    for (size_t i = 0; i < perm.size(); ++i) {
      out.states[static_cast<size_t>(j)].locals[i] =
          set.states[static_cast<size_t>(j)].locals[static_cast<size_t>(perm[i])];
    }
  }
  return out;
}

StateSet cycle_family(const FamilyParams& p) {
  const double tol = kDefaultTol;
  if (!nonzero(p.a, tol) || !nonzero(p.b, tol) || !nonzero(p.ap, tol) ||
      !nonzero(p.bp, tol)) {
    throw std::invalid_argument("cycle_family: a, b, a', b' must be nonzero");
  }
  if (!nonzero(p.e(), tol) || !nonzero(p.ep(), tol)) {
    throw std::invalid_argument(
        "cycle_family: derived e, e' vanish (conj(b) + conj(d) g == 0)");
  }

  const auto party_dim = [tol](const cplx& d, const cplx& g, const cplx& h) {
    if (nonzero(h, tol)) return 5;
    if (nonzero(d, tol) || nonzero(g, tol)) return 4;
    return 3;
  };
  const int d1 = party_dim(p.d, p.g, p.h);
  const int d2 = party_dim(p.dp, p.gp, p.hp);

  StateSet set;
  set.parties = 2;
  set.dims = {d1, d2};
  set.tol = tol;

  const cplx z = 0.0;
  const auto make = [&](const std::array<cplx, 5>& first,
                        const std::array<cplx, 5>& second) {
    set.states.push_back(
        ProductState{{truncated_ket(first, d1), truncated_ket(second, d2)}});
  };
  make({1, z, z, z, z}, {1, z, p.ap, z, z});
  make({1, z, p.a, z, z}, {z, 1, z, z, z});
  make({1, p.b, p.c(), p.d, z}, {1, p.bp, p.cp(), p.dp, z});
  make({z, 1, p.e(), p.g, p.h}, {1, z, z, z, z});
  make({z, 1, z, z, z}, {z, 1, p.ep(), p.gp, p.hp});
  return set;
}

StateSet cycle_family_basic(cplx a, cplx b, cplx ap, cplx bp) {
  FamilyParams p;
  p.a = a;
  p.b = b;
  p.ap = ap;
  p.bp = bp;
  return cycle_family(p);
}

namespace {

StateSet make_tripartite(const std::vector<std::array<std::array<cplx, 3>, 3>>&
                             amplitudes) {
  StateSet set;
  set.parties = 3;
  set.dims = {3, 3, 3};
  set.tol = kDefaultTol;
  for (const auto& state : amplitudes) {
    ProductState s;
    for (const auto& local : state) {
      s.locals.push_back(normalized(ket({local[0], local[1], local[2]})));
    }
    set.states.push_back(std::move(s));
  }
  return set;
}

}  // namespace

StateSet tripartite_indistinguishable_set() {
  const double r13 = std::sqrt(1.0 / 3.0);
  const double r23 = std::sqrt(2.0 / 3.0);
  return make_tripartite({
      {{{1, 0, 0}, {1, 0, 0}, {r13, r23, 0}}},
      {{{1, 1, -1}, {0, 1, 0}, {1, 1, 0}}},
      {{{1, 0, 1}, {0, 1, 0}, {1, 0, 0}}},
      {{{0, 1, 0}, {1, 1, 0}, {1, -1, 0}}},
      {{{0, 1, 1}, {1, -1, 0}, {0, 1, 0}}},
  });
}

StateSet tripartite_distinguishable_set() {
  return make_tripartite({
      {{{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}},
      {{{1, 1, -1}, {0, 1, 0}, {1, 1, 0}}},
      {{{1, 0, 1}, {0, 1, 0}, {1, 0, 1}}},
      {{{0, 1, 0}, {1, 1, 0}, {1, -1, 0}}},
      {{{0, 1, 1}, {1, -1, 0}, {1, 0, -1}}},
  });
}

}  // namespace opsd
