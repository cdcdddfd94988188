#include "opsd/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opsd {

namespace {

// Least-squares proportionality residual || P B P - lambda P ||_F with
// lambda = tr(P B P) / tr(P).
double proportionality_residual(const CMat& b, const CMat& p) {
  const CMat pbp = p * b * p;
  const double tr_p = p.trace().real();
  if (tr_p <= 0.0) return pbp.norm();
  const cplx lambda = pbp.trace() / tr_p;
  return (pbp - lambda * p).norm();
}

// Outcome probabilities <a_j|B|a_j> of one solution element across the
// party's (normalized) locals.
std::vector<double> outcome_profile(const CMat& b, const StateSet& set, int party) {
  std::vector<double> q;
  for (int j = 0; j < set.size(); ++j) {
    const CVec& a = set.local(j, party);
    q.push_back(inner(a, b * a).real());
  }
  return q;
}

}  // namespace

std::vector<std::pair<int, int>> constraint_pairs(const StateSet& set, int party) {
  if (party < 0 || party >= set.parties) {
    throw std::invalid_argument("constraint_pairs: bad party index");
  }
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < set.size(); ++j) {
    for (int k = j + 1; k < set.size(); ++k) {
      bool on_party = false;
      bool elsewhere = false;
      for (int i = 0; i < set.parties; ++i) {
        const bool orth = std::abs(inner(set.local(j, i), set.local(k, i))) <= set.tol;
        if (i == party) {
          on_party = orth;
        } else {
          elsewhere = elsewhere || orth;
        }
      }
      if (on_party && !elsewhere) pairs.emplace_back(j, k);
    }
  }
  return pairs;
}

OpmSolutionSpace opm_space(const StateSet& set, int party) {
  OpmSolutionSpace space;
  space.party = party;
  space.pairs = constraint_pairs(set, party);
  const int dim = set.dims[static_cast<size_t>(party)];
  std::vector<std::pair<CVec, CVec>> constraints;
  for (const auto& [j, k] : space.pairs) {
    constraints.emplace_back(set.local(j, party), set.local(k, party));
  }
  space.basis = hermitian_solution_space(constraints, dim, set.tol);
  std::vector<CVec> locals;
  for (int j = 0; j < set.size(); ++j) locals.push_back(set.local(j, party));
  space.span_proj = span_projector(locals, dim, set.tol);
  return space;
}

std::string triviality_name(Triviality t) {
  switch (t) {
    case Triviality::ProportionalIdentityOnSpan: return "ProportionalIdentityOnSpan";
    case Triviality::EqualProbabilitiesOnly: return "EqualProbabilitiesOnly";
    case Triviality::Informative: return "Informative";
  }
  return "Informative";
}

TrivialityVerdict classify_triviality(const OpmSolutionSpace& space,
                                      const StateSet& set) {
  TrivialityVerdict verdict;
  const int party = space.party;
  const int dim = set.dims[static_cast<size_t>(party)];

  double worst_prop = 0.0;
  for (const CMat& b : space.basis) {
    worst_prop = std::max(worst_prop, proportionality_residual(b, space.span_proj));
  }
  if (worst_prop <= set.tol) {
    verdict.kind = Triviality::ProportionalIdentityOnSpan;
    verdict.max_residual = worst_prop;
    return verdict;
  }

  // Not proportional on the span; look for an element whose outcome
  // probabilities actually separate two states.
  double worst_spread = 0.0;
  for (const CMat& b : space.basis) {
    const std::vector<double> q = outcome_profile(b, set, party);
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    const double spread = *hi - *lo;
    worst_spread = std::max(worst_spread, spread);
    if (spread <= set.tol) continue;

    verdict.kind = Triviality::Informative;
    verdict.max_residual = spread;
    const int jmin = static_cast<int>(lo - q.begin());
    const int jmax = static_cast<int>(hi - q.begin());
    verdict.distinguished = {std::min(jmin, jmax), std::max(jmin, jmax)};
    // Scale Delta into a strictly interior POVM element: with
    // eps = 1/(2 (1 + ||Delta||)), both (I + eps*Delta)/2 and its
    // complement have eigenvalues in [1/4, 3/4].
    const double eps = 0.5 / (1.0 + operator_norm(b));
    verdict.witness = 0.5 * (CMat::Identity(dim, dim) + eps * b);
    return verdict;
  }

  verdict.kind = Triviality::EqualProbabilitiesOnly;
  verdict.max_residual = worst_spread;
  return verdict;
}

std::optional<Certificate> certify_indistinguishable(const StateSet& set) {
  Certificate cert;
  for (int party = 0; party < set.parties; ++party) {
    PartyCertificate pc;
    pc.space = opm_space(set, party);
    pc.verdict = classify_triviality(pc.space, set);
    if (pc.verdict.kind != Triviality::ProportionalIdentityOnSpan) return std::nullopt;
    cert.parties.push_back(std::move(pc));
  }
  return cert;
}

double certificate_residual(const Certificate& cert, const StateSet& set) {
  double worst = 0.0;
  for (const PartyCertificate& pc : cert.parties) {
    const int party = pc.space.party;
    for (const CMat& b : pc.space.basis) {
      for (const auto& [j, k] : pc.space.pairs) {
        worst = std::max(worst,
                         std::abs(inner(set.local(j, party), b * set.local(k, party))));
      }
      worst = std::max(worst, proportionality_residual(b, pc.space.span_proj));
    }
  }
  return worst;
}

}  // namespace opsd
