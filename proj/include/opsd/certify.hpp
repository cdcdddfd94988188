#pragma once

// Indistinguishability certification through orthogonality-preserving
// measurements (OPMs). For each party, any protocol's first useful local
// measurement must keep the full set pairwise orthogonal, which pins its
// POVM elements to a real-linear solution space of Hermitian matrices.
// If, for every party, every solution compresses to a multiple of the
// identity on the span of that party's locals, no party can ever extract
// information and the set is locally indistinguishable; otherwise the
// witness element explicitly starts a discriminating protocol.

#include "opsd/states.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opsd {

// Pairs (0-based, j < k) whose locals are orthogonal on `party` and on no
// other party. Only these pairs constrain the party's OPM elements: a pair
// that is also orthogonal elsewhere stays orthogonal regardless of what
// the measurement does on `party`.
std::vector<std::pair<int, int>> constraint_pairs(const StateSet& set, int party);

struct OpmSolutionSpace {
  int party = 0;
  std::vector<std::pair<int, int>> pairs;  // the constraint pairs used
  std::vector<CMat> basis;                 // Hermitian basis of the space
  CMat span_proj;                          // projector onto span of locals
};

// Solves {E Hermitian : <a_j|E|a_k> = 0 for each constraint pair} on
// `party`'s space. The identity is always a solution, so the basis is
// never empty.
OpmSolutionSpace opm_space(const StateSet& set, int party);

enum class Triviality {
  ProportionalIdentityOnSpan,  // P E P is a multiple of P for every solution
  EqualProbabilitiesOnly,      // all outcome probabilities equal, yet
                               // P E P need not be proportional to P
  Informative,                 // some solution gives unequal probabilities
};

std::string triviality_name(Triviality t);

struct TrivialityVerdict {
  Triviality kind = Triviality::ProportionalIdentityOnSpan;
  // Informative only: a valid POVM element E = (I + eps*Delta)/2 in the
  // solution space whose outcome probabilities differ between the
  // `distinguished` states; {E, I - E} is a complete two-outcome POVM.
  CMat witness;
  std::pair<int, int> distinguished{-1, -1};
  // ProportionalIdentityOnSpan: worst proportionality residual over the
  // basis. Otherwise: the largest probability spread found.
  double max_residual = 0.0;
};

TrivialityVerdict classify_triviality(const OpmSolutionSpace& space,
                                      const StateSet& set);

struct PartyCertificate {
  OpmSolutionSpace space;
  TrivialityVerdict verdict;
};

// One PartyCertificate per party, in party order. Valid as an
// indistinguishability certificate only when every verdict is
// ProportionalIdentityOnSpan.
struct Certificate {
  std::vector<PartyCertificate> parties;
};

// Some(certificate) iff every party's OPM solution space is trivial in
// the ProportionalIdentityOnSpan sense; nullopt as soon as any party
// admits more.
std::optional<Certificate> certify_indistinguishable(const StateSet& set);

// Independent re-check of a certificate against a set: the largest
// constraint residual |<a_j|B|a_k>| together with the largest
// proportionality residual over all parties and basis elements.
double certificate_residual(const Certificate& cert, const StateSet& set);

}  // namespace opsd
