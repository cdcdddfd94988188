#include "opsd/synthesis.hpp"

#include "opsd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opsd {

namespace {

bool all_pairs_orthogonal_on(const StateSet& set, int party) {
  for (int j = 0; j < set.size(); ++j) {
    for (int k = j + 1; k < set.size(); ++k) {
      if (std::abs(inner(set.local(j, party), set.local(k, party))) > set.tol) return false;
    }
  }
  return true;
}

// s orthogonal to every other state on `party`.
bool is_isolating(const StateSet& set, int party, int s) {
  for (int k = 0; k < set.size(); ++k) {
    if (k == s) continue;
    if (std::abs(inner(set.local(s, party), set.local(k, party))) > set.tol) return false;
  }
  return true;
}

// s and t jointly orthogonal to every third state on `party`.
bool is_pair_block(const StateSet& set, int party, int s, int t) {
  for (int k = 0; k < set.size(); ++k) {
    if (k == s || k == t) continue;
    if (std::abs(inner(set.local(s, party), set.local(k, party))) > set.tol) return false;
    if (std::abs(inner(set.local(t, party), set.local(k, party))) > set.tol) return false;
  }
  return true;
}

std::vector<int> pick(const std::vector<int>& labels, const std::vector<int>& idx) {
  std::vector<int> out;
  for (int i : idx) out.push_back(labels[static_cast<size_t>(i)]);
  return out;
}

// Depth-limited search for a perfect discrimination protocol. A candidate
// measurement survives only if every outcome strictly shrinks the state
// list, multi-survivor outcomes stay pairwise orthogonal, and each of
// those outcomes recursively completes. The evaluation budget keeps
// adversarial instances from exploding; exhausting it just fails the
// search (the caller falls through to the certificate and probe paths).
class PerfectSearch {
 public:
  std::optional<ProtocolPtr> run(const StateSet& set, const std::vector<int>& labels,
                                 int depth) {
    const int n = set.size();
    if (n == 0) return ambiguous_leaf({});
    if (n == 1) return identified_leaf(labels[0]);

    // The three-matching pattern on three rank-2 parties admits no
    // perfect protocol at all; hand it straight back to the caller's
    // certificate path instead of burning search budget.
    if (n == 4 && set.parties == 3) {
      const CaseId id = classify(compute_graph(set));
      if (id.pattern == Pattern::Matching13) {
        bool all_rank2 = true;
        for (int party = 0; party < set.parties && all_rank2; ++party) {
          all_rank2 = local_rank(set, party) == 2;
        }
        if (all_rank2) return std::nullopt;
      }
    }
    if (depth <= 0 || budget_ <= 0) return std::nullopt;

    // Complete one-party discrimination whenever a single party already
    // separates everything.
    for (int party = 0; party < set.parties; ++party) {
      if (!all_pairs_orthogonal_on(set, party)) continue;
      if (auto p = try_candidate(set, labels, complete_local_discrimination(set, party),
                                 depth)) {
        return p;
      }
    }
    // Isolating split: one state orthogonal to all others on one party.
    for (int party = 0; party < set.parties; ++party) {
      for (int s = 0; s < n; ++s) {
        if (!is_isolating(set, party, s)) continue;
        if (auto p = try_candidate(
                set, labels, projective_split(party, set.local(s, party), set.tol), depth)) {
          return p;
        }
      }
    }
    // Pair block: two states jointly orthogonal to the rest on one party
    // peel off through their own projectors (if mutually orthogonal
    // there) or through their common subspace.
    for (int party = 0; party < set.parties; ++party) {
      for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
          if (!is_pair_block(set, party, s, t)) continue;
          const CVec& a = set.local(s, party);
          const CVec& b = set.local(t, party);
          const Measurement m =
              std::abs(inner(a, b)) <= set.tol
                  ? pair_split(party, a, b, set.tol)
                  : span_split(party, {a, b}, set.tol);
          if (auto p = try_candidate(set, labels, m, depth)) return p;
        }
      }
    }
    // General projective splits along every distinct local direction.
    for (int party = 0; party < set.parties; ++party) {
      for (const CVec& v : candidate_projectors(set, party)) {
        if (auto p = try_candidate(set, labels, projective_split(party, v, set.tol),
                                   depth)) {
          return p;
        }
      }
    }
    // Pairwise splits along orthogonal local pairs.
    for (int party = 0; party < set.parties; ++party) {
      for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
          const CVec& a = set.local(s, party);
          const CVec& b = set.local(t, party);
          if (std::abs(inner(a, b)) > set.tol) continue;
          if (auto p = try_candidate(set, labels, pair_split(party, a, b, set.tol),
                                     depth)) {
            return p;
          }
        }
      }
    }
    // Two-dimensional subspace splits over every local pair.
    for (int party = 0; party < set.parties; ++party) {
      for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
          if (auto p = try_candidate(
                  set, labels,
                  span_split(party, {set.local(s, party), set.local(t, party)}, set.tol),
                  depth)) {
            return p;
          }
        }
      }
    }
    // Four-outcome sign split on 3-dimensional parties.
    for (int party = 0; party < set.parties; ++party) {
      if (set.dims[static_cast<size_t>(party)] != 3) continue;
      if (auto p = try_candidate(set, labels, quad_sign_split(party), depth)) return p;
    }
    return std::nullopt;
  }

 private:
  std::optional<ProtocolPtr> try_candidate(const StateSet& set,
                                           const std::vector<int>& labels,
                                           const Measurement& m, int depth) {
    if (--budget_ <= 0) return std::nullopt;
    const int n = set.size();
    std::vector<OutcomeUpdate> updates;
    for (int out = 0; out < m.outcomes(); ++out) {
      updates.push_back(apply(set, m, out));
      if (static_cast<int>(updates.back().kept.size()) == n) return std::nullopt;
    }
    std::vector<ProtocolPtr> branches;
    for (int out = 0; out < m.outcomes(); ++out) {
      const OutcomeUpdate& up = updates[static_cast<size_t>(out)];
      if (up.kept.empty()) {
        branches.push_back(ambiguous_leaf({}));  // unreachable outcome
      } else if (up.kept.size() == 1) {
        branches.push_back(identified_leaf(labels[static_cast<size_t>(up.kept[0])]));
      } else {
        if (!preserves_orthogonality(set, m, out)) return std::nullopt;
        auto sub = run(up.post, pick(labels, up.kept), depth - 1);
        if (!sub) return std::nullopt;
        branches.push_back(*sub);
      }
    }
    return step(m, std::move(branches));
  }

  int budget_ = 50000;
};

// Rank-revealing probe: for one or two target states, project onto the
// orthogonal complement of everyone else's local span. The probe outcome
// then contains the targets only and is finished perfectly; the
// complementary outcome is continued perfectly when possible, declared
// dead when the survivors lose orthogonality, and left ambiguous
// otherwise.
std::optional<ProtocolPtr> probe_gadget(const StateSet& set,
                                        const std::vector<int>& labels,
                                        const SynthesisOptions& opts,
                                        PerfectSearch& search) {
  const int n = set.size();
  std::vector<std::vector<int>> targets;
  for (int s = 0; s < n; ++s) targets.push_back({s});
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) targets.push_back({s, t});
  }
  for (const std::vector<int>& target : targets) {
    for (int party = 0; party < set.parties; ++party) {
      std::vector<CVec> others;
      for (int k = 0; k < n; ++k) {
        if (std::find(target.begin(), target.end(), k) == target.end()) {
          others.push_back(set.local(k, party));
        }
      }
      const int dim = set.dims[static_cast<size_t>(party)];
      for (const CVec& v : orthonormal_complement(others, dim, set.tol)) {
        const Measurement m = projective_split(party, v, set.tol);
        const OutcomeUpdate probe = apply(set, m, 0);
        if (probe.kept.empty()) continue;
        ProtocolPtr onto;
        if (probe.kept.size() == 1) {
          onto = identified_leaf(labels[static_cast<size_t>(probe.kept[0])]);
        } else {
          if (!preserves_orthogonality(set, m, 0)) continue;
          auto sub = search.run(probe.post, pick(labels, probe.kept), opts.depth_limit);
          if (!sub) continue;
          onto = *sub;
        }
        const OutcomeUpdate rest = apply(set, m, 1);
        ProtocolPtr away;
        if (rest.kept.empty()) {
          away = ambiguous_leaf({});
        } else if (rest.kept.size() == 1) {
          away = identified_leaf(labels[static_cast<size_t>(rest.kept[0])]);
        } else {
          std::vector<std::pair<int, int>> bad;
          if (!preserves_orthogonality(set, m, 1, &bad)) {
            std::vector<std::pair<int, int>> named;
            for (const auto& [j, k] : bad) {
              named.emplace_back(labels[static_cast<size_t>(j)],
                                 labels[static_cast<size_t>(k)]);
            }
            away = dead_leaf(std::move(named));
          } else if (auto sub =
                         search.run(rest.post, pick(labels, rest.kept), opts.depth_limit)) {
            away = *sub;
          } else {
            away = ambiguous_leaf(pick(labels, rest.kept));
          }
        }
        return step(m, {onto, away});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Perfect: return "Perfect";
    case VerdictKind::Probabilistic: return "Probabilistic";
    case VerdictKind::IndistinguishableCertified: return "IndistinguishableCertified";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::vector<CVec> candidate_projectors(const StateSet& set, int party) {
  std::vector<CVec> out;
  for (int j = 0; j < set.size(); ++j) {
    const CVec v = normalized(set.local(j, party), set.tol);
    bool seen = false;
    for (const CVec& u : out) {
      if (std::abs(inner(u, v)) >= 1.0 - 1e3 * set.tol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(v);
  }
  return out;
}

std::optional<ProtocolPtr> base_case(const StateSet& set, const SynthesisOptions& opts) {
  if (set.size() > 4) {
    throw std::invalid_argument("base_case handles at most four states");
  }
  std::vector<int> labels;
  for (int j = 0; j < set.size(); ++j) labels.push_back(j + 1);
  PerfectSearch search;
  return search.run(set, labels, opts.depth_limit);
}

ProtocolPtr cycle_probe_protocol(const FamilyParams& p, int variant) {
  const Measurement probe = cycle_probe(p, variant);
  const std::vector<int> all{1, 2, 3, 4, 5};
  switch (variant) {
    case 1:
      // The probe direction lives only in state 3's first local.
      return step(probe, {identified_leaf(3), ambiguous_leaf(all)});
    case 2:
      // Here only state 4's first local reaches |3>.
      return step(probe, {identified_leaf(4), ambiguous_leaf(all)});
    case 3: {
      // The probe keeps states 4 and 5 at most; they remain orthogonal on
      // the second party, where state 4 sits exactly on |0>.
      const StateSet family = cycle_family(p);
      const Measurement second =
          projective_split(1, basis_ket(0, family.dims[1]), family.tol);
      return step(probe,
                  {step(second, {identified_leaf(4), identified_leaf(5)}),
                   ambiguous_leaf(all)});
    }
    default:
      throw std::invalid_argument("cycle_probe_protocol: variant must be 1, 2, or 3");
  }
}

Verdict synthesize(const StateSet& set, const SynthesisOptions& opts) {
  const ValidationReport validation = validate(set);
  if (!validation.fully_orthogonal) {
    const auto& [j, k] = validation.violations.front();
    throw std::invalid_argument("synthesize: states " + std::to_string(j + 1) + " and " +
                                std::to_string(k + 1) + " are not orthogonal");
  }
  std::vector<int> labels;
  for (int j = 0; j < set.size(); ++j) labels.push_back(j + 1);

  PerfectSearch search;
  Verdict verdict;
  if (auto protocol = search.run(set, labels, opts.depth_limit)) {
    verdict.report = simulate(*protocol, set);
    if (!verify_perfect(verdict.report, set.tol)) {
      throw std::logic_error("synthesize: perfect protocol failed re-simulation");
    }
    verdict.kind = VerdictKind::Perfect;
    verdict.protocol = *protocol;
    return verdict;
  }
  if (auto certificate = certify_indistinguishable(set)) {
    verdict.kind = VerdictKind::IndistinguishableCertified;
    verdict.certificate = std::move(certificate);
    return verdict;
  }
  if (auto protocol = probe_gadget(set, labels, opts, search)) {
    SimulationReport report = simulate(*protocol, set);
    if (report.overall > set.tol) {
      // Classification follows the verified simulation, never the search.
      verdict.kind = verify_perfect(report, set.tol) ? VerdictKind::Perfect
                                                     : VerdictKind::Probabilistic;
      verdict.protocol = *protocol;
      verdict.report = std::move(report);
      return verdict;
    }
  }
  verdict.kind = VerdictKind::Unknown;
  verdict.reason =
      "no synthesis rule completes a perfect protocol, the "
      "measurement-triviality certificate does not close, and no "
      "rank-revealing probe applies";
  for (int party = 0; party < set.parties; ++party) {
    const TrivialityVerdict t = classify_triviality(opm_space(set, party), set);
    verdict.findings.push_back("party " + std::to_string(party + 1) +
                               " orthogonality-preserving measurements: " +
                               triviality_name(t.kind));
  }
  return verdict;
}

}  // namespace opsd
