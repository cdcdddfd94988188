#pragma once

// Finite LOCC protocol trees and their exact simulation. Internal nodes
// carry one local measurement with a branch per outcome; leaves either
// announce a state, give up on a listed candidate set, or mark a branch
// where the survivors lost mutual orthogonality. Simulation propagates
// every input state down every branch with exact Born probabilities, so
// path masses per state sum to one and claimed identifications can be
// checked for soundness.

#include "opsd/measurement.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace opsd {

enum class LeafKind {
  Identified,  // protocol announces one state label
  Ambiguous,   // protocol stops with several candidates left
  Dead,        // survivors lost pairwise orthogonality; no sound continuation
};

struct ProtocolNode;
using ProtocolPtr = std::shared_ptr<const ProtocolNode>;

struct ProtocolNode {
  enum class Kind { Leaf, Step };
  Kind kind = Kind::Leaf;

  // Leaf payload. State labels are 1-based and always refer to the set the
  // ROOT of the tree is simulated against, regardless of depth.
  LeafKind leaf = LeafKind::Ambiguous;
  int identified = 0;                            // Identified only
  std::vector<int> candidates;                   // Ambiguous only
  std::vector<std::pair<int, int>> offending;    // Dead only (1-based pairs)

  // Step payload: branches.size() == meas.outcomes().
  Measurement meas;
  std::vector<ProtocolPtr> branches;
};

ProtocolPtr identified_leaf(int label);
ProtocolPtr ambiguous_leaf(std::vector<int> candidates);
ProtocolPtr dead_leaf(std::vector<std::pair<int, int>> offending);
ProtocolPtr step(Measurement meas, std::vector<ProtocolPtr> branches);

int tree_depth(const ProtocolPtr& node);

// One root-to-leaf trajectory of one input state: the outcome indices
// taken, the exact probability of that trajectory given the state, and
// what the leaf declared.
struct PathRecord {
  std::vector<int> path;
  double probability = 0.0;
  LeafKind leaf = LeafKind::Ambiguous;
  int identified = 0;  // valid when leaf == Identified
};

struct SimulationReport {
  std::vector<int> labels;                    // 1-based input labels (1..n)
  std::vector<std::vector<PathRecord>> paths; // per input state, DFS order
  std::vector<double> success;                // P(announce j | state j)
  double overall = 0.0;                       // sum_j prior_j * success_j
  double conservation_error = 0.0;            // max_j |1 - sum of path masses|
  bool sound = true;                          // no Identified leaf collects
                                              // foreign mass > tol
  double tol = kDefaultTol;
};

// Exact simulation of the tree against every state of the set. priors
// defaults to uniform; it must otherwise hold set.size() nonnegative
// entries. Throws std::invalid_argument on malformed trees (branch/outcome
// mismatch, measurement dimension mismatch, identified label out of
// range). An empty set yields an empty report.
SimulationReport simulate(const ProtocolPtr& root, const StateSet& set,
                          const std::vector<double>& priors = {});

// True when every state is announced correctly with probability 1 within
// tol. Vacuously true for an empty report.
bool verify_perfect(const SimulationReport& report, double tol = kDefaultTol);

}  // namespace opsd
