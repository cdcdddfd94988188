#include "opsd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opsd {

namespace {

std::shared_ptr<ProtocolNode> make_leaf(LeafKind kind) {
  auto node = std::make_shared<ProtocolNode>();
  node->kind = ProtocolNode::Kind::Leaf;
  node->leaf = kind;
  return node;
}

struct Walker {
  const StateSet* set = nullptr;
  int n = 0;
  SimulationReport* report = nullptr;

  // One downward pass carrying, for every input state, its current local
  // kets and the exact probability of the path so far. Probabilities
  // multiply Born factors; nothing is rounded away, so the per-state path
  // masses at the leaves sum to one up to floating-point error.
  void walk(const ProtocolNode& node, std::vector<int>& path,
            std::vector<ProductState>& current, std::vector<double>& mass) {
    if (node.kind == ProtocolNode::Kind::Leaf) {
      if (node.leaf == LeafKind::Identified &&
          (node.identified < 1 || node.identified > n)) {
        throw std::invalid_argument("protocol identifies state " +
                                    std::to_string(node.identified) +
                                    " outside 1.." + std::to_string(n));
      }
      for (int j = 0; j < n; ++j) {
        if (mass[static_cast<size_t>(j)] <= 0.0) continue;
        PathRecord rec;
        rec.path = path;
        rec.probability = mass[static_cast<size_t>(j)];
        rec.leaf = node.leaf;
        rec.identified = node.leaf == LeafKind::Identified ? node.identified : 0;
        report->paths[static_cast<size_t>(j)].push_back(std::move(rec));
      }
      return;
    }
    if (node.branches.size() != static_cast<size_t>(node.meas.outcomes())) {
      throw std::invalid_argument("protocol step has " +
                                  std::to_string(node.branches.size()) +
                                  " branches for " +
                                  std::to_string(node.meas.outcomes()) + " outcomes");
    }
    const int party = node.meas.party;
    if (party < 0 || party >= set->parties ||
        node.meas.dim() != set->dims[static_cast<size_t>(party)]) {
      throw std::invalid_argument("protocol step measurement does not fit the set");
    }
    for (int out = 0; out < node.meas.outcomes(); ++out) {
      const CMat& k = node.meas.kraus[static_cast<size_t>(out)];
      std::vector<ProductState> next = current;
      std::vector<double> next_mass(static_cast<size_t>(n), 0.0);
      bool alive = false;
      for (int j = 0; j < n; ++j) {
        if (mass[static_cast<size_t>(j)] <= 0.0) continue;
        const CVec image = k * current[static_cast<size_t>(j)].locals[static_cast<size_t>(party)];
        const double p = image.squaredNorm();
        // Guard renormalization, not accounting: a truly dead branch keeps
        // probability zero instead of dividing by ~0.
        if (p > 1e-300) {
          next_mass[static_cast<size_t>(j)] = mass[static_cast<size_t>(j)] * p;
          next[static_cast<size_t>(j)].locals[static_cast<size_t>(party)] = image / image.norm();
          alive = true;
        }
      }
      if (!alive) continue;  // unreachable branch: no state carries mass here
      path.push_back(out);
      walk(*node.branches[static_cast<size_t>(out)], path, next, next_mass);
      path.pop_back();
    }
  }
};

}  // namespace

ProtocolPtr identified_leaf(int label) {
  auto node = make_leaf(LeafKind::Identified);
  node->identified = label;
  return node;
}

ProtocolPtr ambiguous_leaf(std::vector<int> candidates) {
  auto node = make_leaf(LeafKind::Ambiguous);
  node->candidates = std::move(candidates);
  return node;
}

ProtocolPtr dead_leaf(std::vector<std::pair<int, int>> offending) {
  auto node = make_leaf(LeafKind::Dead);
  node->offending = std::move(offending);
  return node;
}

ProtocolPtr step(Measurement meas, std::vector<ProtocolPtr> branches) {
  if (branches.size() != static_cast<size_t>(meas.outcomes())) {
    throw std::invalid_argument("step: need one branch per outcome");
  }
  for (const ProtocolPtr& b : branches) {
    if (b == nullptr) throw std::invalid_argument("step: null branch");
  }
  auto node = std::make_shared<ProtocolNode>();
  node->kind = ProtocolNode::Kind::Step;
  node->meas = std::move(meas);
  node->branches = std::move(branches);
  return node;
}

int tree_depth(const ProtocolPtr& node) {
  if (node == nullptr || node->kind == ProtocolNode::Kind::Leaf) return 0;
  int deepest = 0;
  for (const ProtocolPtr& b : node->branches) deepest = std::max(deepest, tree_depth(b));
  return 1 + deepest;
}

SimulationReport simulate(const ProtocolPtr& root, const StateSet& set,
                          const std::vector<double>& priors) {
  if (root == nullptr) throw std::invalid_argument("simulate: null protocol");
  const int n = set.size();
  SimulationReport report;
  report.tol = set.tol;
  if (n == 0) return report;
  std::vector<double> prior = priors;
  if (prior.empty()) {
    prior.assign(static_cast<size_t>(n), 1.0 / n);
  } else if (prior.size() != static_cast<size_t>(n)) {
    throw std::invalid_argument("simulate: priors size does not match the set");
  }
  for (int j = 0; j < n; ++j) report.labels.push_back(j + 1);
  report.paths.resize(static_cast<size_t>(n));

  Walker walker{&set, n, &report};
  std::vector<int> path;
  std::vector<ProductState> current = set.states;
  std::vector<double> mass(static_cast<size_t>(n), 1.0);
  walker.walk(*root, path, current, mass);

  report.success.assign(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double total = 0.0;
    for (const PathRecord& rec : report.paths[static_cast<size_t>(j)]) {
      total += rec.probability;
      if (rec.leaf == LeafKind::Identified) {
        if (rec.identified == j + 1) {
          report.success[static_cast<size_t>(j)] += rec.probability;
        } else if (rec.probability > set.tol) {
          report.sound = false;  // foreign mass at an announcing leaf
        }
      }
    }
    report.conservation_error = std::max(report.conservation_error, std::abs(1.0 - total));
    report.overall += prior[static_cast<size_t>(j)] * report.success[static_cast<size_t>(j)];
  }
  return report;
}

bool verify_perfect(const SimulationReport& report, double tol) {
  if (!report.sound) return false;
  for (double s : report.success) {
    if (std::abs(1.0 - s) > tol) return false;
  }
  return report.conservation_error <= tol;
}

}  // namespace opsd
