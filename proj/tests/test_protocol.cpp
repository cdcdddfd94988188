#include "opsd/protocol.hpp"

#include "opsd/measurement.hpp"
#include "opsd/states.hpp"
#include "opsd/synthesis.hpp"

#include "doctest.h"

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace opsd;

TEST_SUITE_BEGIN("protocol");

namespace {

// Hand-built perfect discrimination tree for the distinguishable
// tripartite set: the third-party sign split leaves three candidates per
// outcome, and two rank-1 projective rounds on the other parties separate
// them along the graph's edges.
ProtocolPtr easy_tree(const StateSet& easy) {
  const auto last = [&](int announce, int partyA, int localA, int idA,
                        int partyB, int localB, int idB, int idC) {
    return step(
        projective_split(partyA, easy.local(localA, partyA)),
        {identified_leaf(idA),
         step(projective_split(partyB, easy.local(localB, partyB)),
              {identified_leaf(idB), identified_leaf(idC)})});
    (void)announce;
  };
  // ++ keeps {1,2,3}: state 1 isolates on party 2, then (2,3) split on
  // party 1.
  const ProtocolPtr pp = last(0, 1, 0, 1, 0, 1, 2, 3);
  // -+ keeps {1,3,4}: state 4 isolates on party 1, then (1,3) on party 2.
  const ProtocolPtr mp = last(0, 0, 3, 4, 1, 0, 1, 3);
  // +- keeps {1,2,5}: state 5 isolates on party 1, then (1,2) on party 2.
  const ProtocolPtr pm = last(0, 0, 4, 5, 1, 0, 1, 2);
  // -- keeps {1,4,5}: state 1 isolates on party 1, then (4,5) on party 2.
  const ProtocolPtr mm = last(0, 0, 0, 1, 1, 3, 4, 5);
  return step(quad_sign_split(2), {pp, mp, pm, mm});
}

}  // namespace

TEST_CASE("leaf constructors store their payloads") {
  const ProtocolPtr id = identified_leaf(3);
  CHECK(id->kind == ProtocolNode::Kind::Leaf);
  CHECK(id->leaf == LeafKind::Identified);
  CHECK(id->identified == 3);
  CHECK(tree_depth(id) == 0);

  const ProtocolPtr amb = ambiguous_leaf({2, 5});
  CHECK(amb->leaf == LeafKind::Ambiguous);
  CHECK(amb->candidates == std::vector<int>{2, 5});

  const ProtocolPtr dead = dead_leaf({{1, 2}});
  CHECK(dead->leaf == LeafKind::Dead);
  CHECK(dead->offending == std::vector<std::pair<int, int>>{{1, 2}});

  CHECK(tree_depth(nullptr) == 0);
}

TEST_CASE("an ambiguous-only protocol is sound but never succeeds") {
  const StateSet easy = tripartite_distinguishable_set();
  const SimulationReport report =
      simulate(ambiguous_leaf({1, 2, 3, 4, 5}), easy);

  CHECK(report.labels == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(report.success == std::vector<double>{0, 0, 0, 0, 0});
  CHECK(report.overall == 0.0);
  CHECK(report.sound);
  CHECK(report.conservation_error == 0.0);
  CHECK_FALSE(verify_perfect(report));

  // Every state takes the single empty path with its full mass.
  for (const auto& paths : report.paths) {
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].path.empty());
    CHECK(paths[0].probability == 1.0);
    CHECK(paths[0].leaf == LeafKind::Ambiguous);
  }
}

TEST_CASE("a hand-built tree discriminates the tripartite set perfectly") {
  const StateSet easy = tripartite_distinguishable_set();
  const ProtocolPtr tree = easy_tree(easy);
  CHECK(tree_depth(tree) == 3);

  const SimulationReport report = simulate(tree, easy);
  CHECK(verify_perfect(report, 1e-10));
  CHECK(report.overall == doctest::Approx(1.0));
  CHECK(report.conservation_error <= 1e-12);
  for (double s : report.success) CHECK(s == doctest::Approx(1.0));

  SUBCASE("the sign split spreads each state over its surviving branches") {
    // State 1 overlaps all four sign vectors with weight 1/4 and is
    // announced on each; states 2..5 split 1/2 + 1/2 over two branches.
    REQUIRE(report.paths[0].size() == 4);
    for (const PathRecord& rec : report.paths[0]) {
      CHECK(rec.probability == doctest::Approx(0.25));
      CHECK(rec.leaf == LeafKind::Identified);
      CHECK(rec.identified == 1);
    }
    // States 2..5 carry half their mass down each of two branches; any
    // further records are sub-tolerance rounding dust on pruned branches.
    for (int j = 1; j < 5; ++j) {
      int significant = 0;
      for (const PathRecord& rec : report.paths[static_cast<size_t>(j)]) {
        if (rec.probability <= 1e-9) continue;
        ++significant;
        CHECK(rec.probability == doctest::Approx(0.5));
        CHECK(rec.identified == j + 1);
      }
      CHECK(significant == 2);
    }
  }

  SUBCASE("an identity step changes nothing but the recorded paths") {
    const ProtocolPtr wrapped =
        step(identity_measurement(0, 3), {tree});
    CHECK(tree_depth(wrapped) == 4);
    const SimulationReport inner = simulate(wrapped, easy);
    CHECK(verify_perfect(inner, 1e-10));
    for (size_t j = 0; j < 5; ++j) {
      CHECK(inner.success[j] == doctest::Approx(report.success[j]));
      // Paths gain the no-op outcome as a prefix.
      CHECK(inner.paths[j][0].path.front() == 0);
      CHECK(inner.paths[j][0].path.size() ==
            report.paths[j][0].path.size() + 1);
    }
  }

  SUBCASE("non-uniform priors reweight the overall rate only") {
    const SimulationReport skew =
        simulate(tree, easy, {0.5, 0.5, 0.0, 0.0, 0.0});
    CHECK(skew.success == report.success);
    CHECK(skew.overall == doctest::Approx(1.0));
    CHECK_THROWS_AS(simulate(tree, easy, {0.5, 0.5}),
                    std::invalid_argument);
  }
}

TEST_CASE("probe protocols harvest exactly the closed-form mass") {
  SUBCASE("pure fourth-coefficient family") {
    FamilyParams p;
    p.d = p.dp = 1.0;
    const StateSet set = cycle_family(p);
    const SimulationReport report =
        simulate(cycle_probe_protocol(p, 1), set);

    // Only state 3 carries probe mass: |d|^2/(1+|b|^2+|c|^2+|d|^2) = 1/4,
    // so the uniform-prior overall rate is 1/20.
    CHECK(report.success[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.success[2] == doctest::Approx(0.25));
    CHECK(report.overall == doctest::Approx(0.05));
    CHECK(report.sound);
    CHECK(report.conservation_error <= 1e-12);
    CHECK_FALSE(verify_perfect(report));

    // State 3 walks both branches; the others never reach the probe leaf.
    CHECK(report.paths[2].size() == 2);
    CHECK(report.paths[2][0].path == std::vector<int>{0});
    CHECK(report.paths[2][1].path == std::vector<int>{1});
    CHECK(report.paths[0].size() == 1);
    CHECK(report.paths[0][0].path == std::vector<int>{1});
    CHECK(report.paths[0][0].leaf == LeafKind::Ambiguous);

    SUBCASE("priors concentrated on the probed state raise the rate") {
      const SimulationReport focused =
          simulate(cycle_probe_protocol(p, 1), set, {0, 0, 1, 0, 0});
      CHECK(focused.overall == doctest::Approx(0.25));
    }
  }

  SUBCASE("mixed-coefficient family identifies state 5 at rate 1/2") {
    FamilyParams p;
    p.d = p.g = p.dp = p.gp = 1.0;
    const StateSet set = cycle_family(p);
    const SimulationReport report =
        simulate(cycle_probe_protocol(p, 3), set);

    // d - gb = 0 silences state 4; state 5 keeps |d|^2/(|b|^2+|d|^2).
    for (int j = 0; j < 4; ++j) {
      CHECK(report.success[static_cast<size_t>(j)] ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(report.success[4] == doctest::Approx(0.5));
    CHECK(report.overall == doctest::Approx(0.1));
    CHECK(report.sound);
    CHECK(report.conservation_error <= 1e-12);
  }
}

TEST_CASE("dead leaves absorb mass without announcing") {
  FamilyParams p;
  p.d = p.dp = 1.0;
  const StateSet set = cycle_family(p);
  const ProtocolPtr tree = step(cycle_probe(p, 1),
                                {identified_leaf(3), dead_leaf({{1, 2}})});
  const SimulationReport report = simulate(tree, set);

  CHECK(report.sound);
  CHECK(report.success[2] == doctest::Approx(0.25));
  CHECK(report.conservation_error <= 1e-12);
  CHECK(report.paths[0][0].leaf == LeafKind::Dead);
  CHECK_FALSE(verify_perfect(report));
}

TEST_CASE("malformed trees are rejected") {
  const StateSet easy = tripartite_distinguishable_set();

  SUBCASE("null protocols and null branches") {
    CHECK_THROWS_AS(simulate(nullptr, easy), std::invalid_argument);
    CHECK_THROWS_AS(step(quad_sign_split(2),
                         {nullptr, nullptr, nullptr, nullptr}),
                    std::invalid_argument);
  }

  SUBCASE("branch count must match the outcome count") {
    CHECK_THROWS_AS(step(quad_sign_split(2), {ambiguous_leaf({1})}),
                    std::invalid_argument);
    // A node assembled by hand bypasses the constructor check and is
    // caught at simulation time.
    auto node = std::make_shared<ProtocolNode>();
    node->kind = ProtocolNode::Kind::Step;
    node->meas = quad_sign_split(2);
    node->branches = {ambiguous_leaf({1, 2, 3, 4, 5})};
    CHECK_THROWS_AS(simulate(node, easy), std::invalid_argument);
  }

  SUBCASE("identified labels must land in 1..n") {
    const ProtocolPtr high = step(projective_split(0, easy.local(0, 0)),
                                  {identified_leaf(6), ambiguous_leaf({})});
    CHECK_THROWS_AS(simulate(high, easy), std::invalid_argument);
    CHECK_THROWS_AS(simulate(identified_leaf(0), easy),
                    std::invalid_argument);
  }

  SUBCASE("measurements must fit the measured party") {
    const ProtocolPtr wide = step(projective_split(0, basis_ket(0, 4)),
                                  {ambiguous_leaf({}), ambiguous_leaf({})});
    CHECK_THROWS_AS(simulate(wide, easy), std::invalid_argument);
    const ProtocolPtr outside = step(projective_split(3, basis_ket(0, 3)),
                                     {ambiguous_leaf({}), ambiguous_leaf({})});
    CHECK_THROWS_AS(simulate(outside, easy), std::invalid_argument);
  }
}

TEST_CASE("an empty set yields an empty, vacuously perfect report") {
  StateSet empty;
  empty.parties = 2;
  empty.dims = {2, 2};
  const SimulationReport report = simulate(ambiguous_leaf({}), empty);
  CHECK(report.labels.empty());
  CHECK(report.success.empty());
  CHECK(report.overall == 0.0);
  CHECK(verify_perfect(report));
}

TEST_SUITE_END();
