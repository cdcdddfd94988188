#pragma once

// Local measurements as explicit Kraus-operator lists bound to one party,
// plus the constructors the synthesis rules draw from (projective and
// subspace splits, complete one-party discrimination, the four-outcome
// sign split, and the rank-revealing probes for the bipartite
// double-cycle family) and the queries that drive protocol search: apply
// an outcome to a state set and check whether the survivors stay pairwise
// orthogonal.

#include "opsd/states.hpp"

#include <string>
#include <utility>
#include <vector>

namespace opsd {

// One local POVM, stored through Kraus operators M_i acting on `party`;
// the POVM elements are E_i = M_i^dag M_i and must sum to the identity.
// Every constructor here emits PSD (self-adjoint) Kraus operators, so
// M_i = E_i^(1/2) throughout.
struct Measurement {
  int party = 0;
  std::vector<CMat> kraus;
  std::vector<std::string> labels;

  int outcomes() const { return static_cast<int>(kraus.size()); }
  int dim() const { return kraus.empty() ? 0 : static_cast<int>(kraus[0].rows()); }
};

// Throws std::invalid_argument unless the labels match the outcomes, the
// operators share one square shape, each E_i is PSD within tol, and
// sum E_i = I within tol (Frobenius norm).
void validate_measurement(const Measurement& m, double tol = kDefaultTol);

// || sum M_i^dag M_i - I ||_F.
double completeness_residual(const Measurement& m);

// Two outcomes {|alpha><alpha|, I - |alpha><alpha|}, labels "onto"/"away".
// alpha must be normalized within tol.
Measurement projective_split(int party, const CVec& alpha,
                             double tol = kDefaultTol);

// Three outcomes {P_alpha, P_beta, I - P_alpha - P_beta}, labels
// "first"/"second"/"rest". Requires <alpha|beta> = 0 within tol.
Measurement pair_split(int party, const CVec& alpha, const CVec& beta,
                       double tol = kDefaultTol);

// Two outcomes {P_span, I - P_span} for span{vs}, labels
// "span"/"complement". vs must be nonempty.
Measurement span_split(int party, const std::vector<CVec>& vs,
                       double tol = kDefaultTol);

// One rank-1 outcome per state, projecting onto the sequentially
// orthonormalized party-locals (outcome i answers "it is state i+1"), plus
// a "rest" outcome exactly when the locals do not already span the party
// space. Requires the locals to be pairwise orthogonal within set.tol;
// throws std::invalid_argument naming the first offending pair otherwise.
Measurement complete_local_discrimination(const StateSet& set, int party);

// Four outcomes (sqrt(3)/6)|0 s1 1 s2 2><...| over the sign patterns
// (s1,s2) = (+,+), (-,+), (+,-), (-,-) on a 3-dimensional party space;
// labels "++", "-+", "+-", "--". The four elements resolve the identity
// exactly.
Measurement quad_sign_split(int party);

// Single-outcome identity ("noop"); simulation across it is a no-op.
Measurement identity_measurement(int party, int dim);

// First-party probe measurement of the double-cycle family, one variant
// per zero pattern of the higher coefficients:
//   1: g = h = 0, d != 0  -> {|3><3|, I - |3><3|}
//   2: d = h = 0, g != 0  -> {|3><3|, I - |3><3|}
//   3: h = 0, d,g != 0    -> {|v><v|, I - |v><v|},
//      v = (conj(d)|1> - conj(b)|3>) / sqrt(|b|^2 + |d|^2)
// Outcome 1 ("probe") isolates one or two states; outcome 2 ("rest")
// keeps the remaining set orthogonal. Throws std::invalid_argument when
// the parameters do not match the variant's zero pattern.
Measurement cycle_probe(const FamilyParams& p, int variant,
                        double tol = kDefaultTol);

// Effect of one outcome on a state set: per-state Born probabilities
// against the original set, and the renormalized post-measurement set
// restricted to the states that survive (probability > set.tol). kept and
// dropped partition the input indices (0-based, ascending).
struct OutcomeUpdate {
  std::vector<double> probabilities;
  StateSet post;
  std::vector<int> kept;
  std::vector<int> dropped;
};

OutcomeUpdate apply(const StateSet& set, const Measurement& m, int outcome);

// True when the surviving states of the outcome are still pairwise
// orthogonal (on at least one party each). When false and `offending` is
// non-null, it receives the surviving pairs (0-based indices into the
// ORIGINAL set) that lost orthogonality.
bool preserves_orthogonality(const StateSet& set, const Measurement& m,
                             int outcome,
                             std::vector<std::pair<int, int>>* offending = nullptr);

}  // namespace opsd
