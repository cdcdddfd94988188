#pragma once

// Protocol synthesis: a depth-limited exact search assembles LOCC
// protocol trees from structure-derived measurement candidates (complete
// one-party discrimination, isolating and pairwise splits, subspace
// splits, the four-outcome sign split), accepting a candidate only when
// every outcome strictly shrinks the candidate state list, keeps the
// survivors pairwise orthogonal, and recursively completes. When no
// perfect protocol exists the engine falls back to the
// orthogonality-preserving-measurement certificate, then to rank-revealing
// probe measurements that buy a guaranteed partial success probability.
// Perfect and probabilistic verdicts are always re-simulated before they
// are returned; nothing is trusted from the search itself.

#include "opsd/certify.hpp"
#include "opsd/protocol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opsd {

enum class VerdictKind {
  Perfect,
  Probabilistic,
  IndistinguishableCertified,
  Unknown,
};

std::string verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  ProtocolPtr protocol;                    // Perfect / Probabilistic
  SimulationReport report;                 // Perfect / Probabilistic
  std::optional<Certificate> certificate;  // IndistinguishableCertified
  std::string reason;                      // Unknown
  std::vector<std::string> findings;       // Unknown: partial observations
};

struct SynthesisOptions {
  int depth_limit = 6;  // measurement rounds per protocol branch
};

// Full pipeline for one validated set. Throws std::invalid_argument when
// the set is not pairwise orthogonal (no discrimination question to ask)
// and std::logic_error if an internally synthesized protocol ever fails
// its re-simulation.
Verdict synthesize(const StateSet& set, const SynthesisOptions& opts = {});

// The party's distinct normalized locals (deduplicated up to a global
// phase), the pool the projective split rules draw from.
std::vector<CVec> candidate_projectors(const StateSet& set, int party);

// Perfect-protocol search specialized to at most four states; the leaves
// identify states by their 1-based position in `set`. Returns nullopt when
// the search fails, in particular for the three-matching tripartite
// pattern with every local rank equal to two, which no measurement
// sequence can crack and which is routed to the certificate path instead.
std::optional<ProtocolPtr> base_case(const StateSet& set,
                                     const SynthesisOptions& opts = {});

// The named two-round probe protocols of the bipartite double-cycle
// family, one per cycle_probe variant: the probe outcome identifies one
// state directly (variants 1 and 2) or hands a two-state remainder to the
// second party (variant 3); the complementary outcome leaves all five
// candidates open.
ProtocolPtr cycle_probe_protocol(const FamilyParams& p, int variant);

}  // namespace opsd
