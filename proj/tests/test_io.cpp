#include "opsd/io.hpp"

#include "opsd/states.hpp"
#include "opsd/synthesis.hpp"

#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace opsd;

TEST_SUITE_BEGIN("io");

namespace {

json load_fixture(const std::string& name) {
  std::ifstream in(std::string(OPSD_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return json::parse(in);
}

json two_qubit_doc() {
  StateSet set;
  set.parties = 2;
  set.dims = {2, 2};
  ProductState a, b;
  a.locals = {basis_ket(0, 2), basis_ket(0, 2)};
  b.locals = {basis_ket(1, 2), basis_ket(1, 2)};
  set.states = {a, b};
  return state_set_to_json(set);
}

}  // namespace

TEST_CASE("state-set fixtures round-trip and match the built-in demos") {
  const std::vector<std::pair<std::string, std::string>> names{
      {"eq3", "eq3.json"},
      {"eq10", "eq10.json"},
      {"eq11", "eq11.json"},
      {"theorem4-1", "theorem4_1.json"},
      {"theorem4-2", "theorem4_2.json"},
      {"theorem4-3", "theorem4_3.json"}};

  for (const auto& [demo, file] : names) {
    CAPTURE(demo);
    const json doc = load_fixture(file);
    const StateSet set = state_set_from_json(doc);

    // Serialization is deterministic, so the rendered bytes come back.
    CHECK(state_set_to_json(set).dump(2) == doc.dump(2));

    const StateSet expected = demo_state_set(demo);
    REQUIRE(set.parties == expected.parties);
    REQUIRE(set.dims == expected.dims);
    REQUIRE(set.size() == expected.size());
    for (int j = 0; j < set.size(); ++j) {
      for (int p = 0; p < set.parties; ++p) {
        CHECK((set.local(j, p) - expected.local(j, p)).norm() <= 1e-14);
      }
    }
  }

  CHECK_THROWS_AS(demo_state_set("bogus"), InputError);
}

TEST_CASE("parsing keeps near-normalized locals and fixes sloppy ones") {
  SUBCASE("within 1e-12 the stored amplitudes are kept bit-exact") {
    json doc = two_qubit_doc();
    doc["states"][0][0][0][0] = 1.0 + 5e-13;
    const StateSet set = state_set_from_json(doc);
    CHECK(set.local(0, 0)(0).real() == 1.0 + 5e-13);
  }
  SUBCASE("clearly unnormalized locals are renormalized") {
    json doc = two_qubit_doc();
    doc["states"][0][0][0][0] = 1.001;
    const StateSet set = state_set_from_json(doc);
    CHECK(set.local(0, 0)(0).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(set.local(0, 0).norm() == doctest::Approx(1.0));
  }
  SUBCASE("zero locals cannot be fixed") {
    json doc = two_qubit_doc();
    doc["states"][0][0][0][0] = 0.0;
    CHECK_THROWS_AS(state_set_from_json(doc), InputError);
  }
}

TEST_CASE("state-set schema violations raise input errors") {
  const json good = two_qubit_doc();

  json no_version = good;
  no_version.erase("version");
  CHECK_THROWS_AS(state_set_from_json(no_version), InputError);

  json wrong_version = good;
  wrong_version["version"] = "2";
  CHECK_THROWS_AS(state_set_from_json(wrong_version), InputError);

  json wrong_kind = good;
  wrong_kind["kind"] = "protocol";
  CHECK_THROWS_AS(state_set_from_json(wrong_kind), InputError);

  json bad_parties = good;
  bad_parties["parties"] = 1;
  CHECK_THROWS_AS(state_set_from_json(bad_parties), InputError);
  bad_parties["parties"] = 17;
  CHECK_THROWS_AS(state_set_from_json(bad_parties), InputError);

  json bad_dims = good;
  bad_dims["dims"] = {2};
  CHECK_THROWS_AS(state_set_from_json(bad_dims), InputError);
  bad_dims["dims"] = {2, 65};
  CHECK_THROWS_AS(state_set_from_json(bad_dims), InputError);

  json short_local = good;
  short_local["states"][0][0] = json::array({json::array({1.0, 0.0})});
  CHECK_THROWS_AS(state_set_from_json(short_local), InputError);

  json bad_amp = good;
  bad_amp["states"][0][0][0] = json::array({1.0});
  CHECK_THROWS_AS(state_set_from_json(bad_amp), InputError);
  bad_amp["states"][0][0][0] = "one";
  CHECK_THROWS_AS(state_set_from_json(bad_amp), InputError);

  json bad_tol = good;
  bad_tol["tol"] = 0.5;
  CHECK_THROWS_AS(state_set_from_json(bad_tol), InputError);
  bad_tol["tol"] = 0.0;
  CHECK_THROWS_AS(state_set_from_json(bad_tol), InputError);
}

TEST_CASE("protocol documents round-trip through JSON") {
  FamilyParams p;
  p.d = p.dp = 1.0;
  const ProtocolPtr tree = cycle_probe_protocol(p, 1);
  const json doc = protocol_to_json(tree);

  CHECK(doc["kind"] == "protocol");
  CHECK(doc["version"] == "1");
  const json& root = doc["root"];
  CHECK(root["type"] == "step");
  CHECK(root["party"] == 1);  // 1-based in documents
  CHECK(root["labels"] == json::array({"probe", "rest"}));
  REQUIRE(root["branches"].size() == 2);
  CHECK(root["branches"][0]["type"] == "identified");
  CHECK(root["branches"][0]["state"] == 3);
  CHECK(root["branches"][1]["type"] == "ambiguous");
  CHECK(root["branches"][1]["candidates"] == json::array({1, 2, 3, 4, 5}));

  const ProtocolPtr back = protocol_from_json(doc);
  CHECK(protocol_to_json(back).dump(2) == doc.dump(2));

  SUBCASE("the reloaded tree simulates identically") {
    const StateSet set = cycle_family(p);
    const SimulationReport a = simulate(tree, set);
    const SimulationReport b = simulate(back, set);
    REQUIRE(a.success.size() == b.success.size());
    for (size_t j = 0; j < a.success.size(); ++j) {
      CHECK(a.success[j] == b.success[j]);
    }
    CHECK(a.overall == b.overall);
  }

  SUBCASE("dead leaves keep their offending pairs") {
    const json dead = protocol_to_json(dead_leaf({{1, 2}, {3, 5}}));
    CHECK(dead["root"]["type"] == "dead");
    CHECK(dead["root"]["offending"] == json::array({json::array({1, 2}),
                                                    json::array({3, 5})}));
    const ProtocolPtr back_dead = protocol_from_json(dead);
    CHECK(back_dead->offending ==
          std::vector<std::pair<int, int>>{{1, 2}, {3, 5}});
  }
}

TEST_CASE("malformed protocol documents raise input errors") {
  FamilyParams p;
  p.d = p.dp = 1.0;
  const json good = protocol_to_json(cycle_probe_protocol(p, 1));

  // Documents without the protocol header are rejected before the tree
  // is even inspected.
  CHECK_THROWS_AS(protocol_from_json(json{{"type", "step"}}), InputError);

  json bad_type = good;
  bad_type["root"]["type"] = "mystery";
  CHECK_THROWS_AS(protocol_from_json(bad_type), InputError);

  json no_state = good;
  no_state["root"]["branches"][0].erase("state");
  CHECK_THROWS_AS(protocol_from_json(no_state), InputError);

  json zero_party = good;
  zero_party["root"]["party"] = 0;
  CHECK_THROWS_AS(protocol_from_json(zero_party), InputError);

  json missing_branch = good;
  missing_branch["root"]["branches"].erase(1);
  CHECK_THROWS_AS(protocol_from_json(missing_branch), InputError);

  json short_labels = good;
  short_labels["root"]["labels"].erase(1);
  CHECK_THROWS_AS(protocol_from_json(short_labels), InputError);

  json ragged = good;
  ragged["root"]["kraus"][0][0].erase(3);
  CHECK_THROWS_AS(protocol_from_json(ragged), InputError);

  json not_square = good;
  not_square["root"]["kraus"][0].erase(3);
  CHECK_THROWS_AS(protocol_from_json(not_square), InputError);
}

TEST_CASE("matrices serialize as nested [re, im] rows") {
  CMat m(2, 3);
  m << cplx(1, 2), cplx(0, -1), cplx(0.5, 0),
       cplx(-3, 0), cplx(0, 0), cplx(2.25, -0.125);
  const json j = matrix_to_json(m);
  REQUIRE(j.size() == 2);
  REQUIRE(j[0].size() == 3);
  CHECK(j[0][0] == json::array({1.0, 2.0}));
  const CMat back = matrix_from_json(j);
  CHECK((back - m).norm() == 0.0);

  CHECK_THROWS_AS(matrix_from_json(json::array()), InputError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[ [1,0] ], [ ]]")),
                  InputError);
}

TEST_CASE("classification payload lists the frozen graph facts") {
  const json result = cmd_classify(demo_state_set("eq11"));

  CHECK(result["canonical_form"] == "n5m3:1122214411");
  CHECK(result["pattern"] == "Generic");
  CHECK(result["relation_vector"] == json::array({5, 3, 2}));
  CHECK(result["relation_vector_sorted"] == json::array({5, 3, 2}));
  CHECK(result["local_ranks"] == json::array({3, 2, 3}));
  CHECK(result["fully_orthogonal"] == true);
  CHECK(result["unique_party"] == true);

  const json edges = result["edges"];
  REQUIRE(edges.size() == 3);
  CHECK(edges[0] == json::parse("[[1,4],[1,5],[2,3],[2,5],[3,4]]"));
  CHECK(edges[1] == json::parse("[[1,2],[1,3],[4,5]]"));
  CHECK(edges[2] == json::parse("[[2,4],[3,5]]"));

  SUBCASE("non-orthogonal inputs are reported as input errors") {
    StateSet broken = demo_state_set("eq11");
    broken.states[4] = broken.states[0];
    CHECK_THROWS_AS(cmd_classify(broken), InputError);
  }
}

TEST_CASE("graph specs parse, serialize, and drive generation") {
  OrthoGraph nine;
  nine.n = 5;
  nine.m = 2;
  for (int j = 0; j < 5; ++j) {
    for (int k = j + 1; k < 5; ++k) {
      nine.labels[{j, k}] = (j == 0 && k == 1) ? std::vector<int>{1}
                                               : std::vector<int>{0};
    }
  }

  const json doc = graph_to_json(nine, {5, 2});
  CHECK(doc["kind"] == "graph");
  CHECK(doc["states"] == 5);
  CHECK(doc["parties"] == 2);

  std::vector<int> dims;
  const OrthoGraph back = graph_from_json(doc, &dims);
  CHECK(back == nine);
  CHECK(dims == std::vector<int>{5, 2});

  SUBCASE("edge and dimension bounds are enforced") {
    json bad = doc;
    bad["edges"][1][0][0] = 0;
    CHECK_THROWS_AS(graph_from_json(bad, nullptr), InputError);
    bad = doc;
    bad["edges"][1][0][1] = 6;
    CHECK_THROWS_AS(graph_from_json(bad, nullptr), InputError);
    bad = doc;
    bad["edges"].erase(1);
    CHECK_THROWS_AS(graph_from_json(bad, nullptr), InputError);
    bad = doc;
    bad["dims"] = {5};
    CHECK_THROWS_AS(graph_from_json(bad, &dims), InputError);
  }

  SUBCASE("generation returns a pipeable state-set document") {
    const json out = cmd_generate(nine, {5, 2}, 5, 0.0);
    CHECK(out["kind"] == "state_set");
    const StateSet set = state_set_from_json(out);
    CHECK(cmd_classify(set)["pattern"] == "IsolatingState");
  }

  SUBCASE("uncovered pairs and infeasible dimensions are input errors") {
    OrthoGraph partial = nine;
    partial.labels.erase({0, 1});
    CHECK_THROWS_AS(cmd_generate(partial, {5, 2}, 5, 0.0), InputError);
    // The greedy realization cannot fit four orthogonal predecessors
    // into four dimensions for the last state.
    CHECK_THROWS_AS(cmd_generate(nine, {4, 2}, 5, 0.0), InputError);
  }
}

TEST_CASE("the command line runs end to end on string streams") {
  const std::string fixture_dir = OPSD_FIXTURE_DIR;

  SUBCASE("demo reports carry the envelope fields") {
    CliOptions opts;
    opts.command = "demo";
    opts.demo = "eq3";
    std::ostringstream out, err;
    REQUIRE(run_cli(opts, out, err) == 0);
    const json report = json::parse(out.str());
    CHECK(report["command"] == "demo");
    CHECK(report["input"] == "eq3");
    CHECK(report["kind"] == "report");
    CHECK(report["version"] == "1");
    CHECK(report["tool_version"] == tool_version());
    CHECK(report["result"]["verdict"] == "IndistinguishableCertified");
    CHECK(report["result"]["certificate"]["certified"] == true);
  }

  SUBCASE("classification renders as text") {
    CliOptions opts;
    opts.command = "classify";
    opts.input = fixture_dir + "/eq11.json";
    opts.format = "text";
    std::ostringstream out, err;
    REQUIRE(run_cli(opts, out, err) == 0);
    CHECK(out.str().find("relation vector: (5, 3, 2)") != std::string::npos);
    CHECK(out.str().find("pattern: Generic") != std::string::npos);
  }

  SUBCASE("simulation replays a protocol document from disk") {
    FamilyParams p;
    p.d = p.dp = 1.0;
    const std::string path = "io_test_protocol.json";
    {
      std::ofstream file(path);
      file << protocol_to_json(cycle_probe_protocol(p, 1)).dump(2) << "\n";
    }
    CliOptions opts;
    opts.command = "simulate";
    opts.input = fixture_dir + "/theorem4_1.json";
    opts.protocol = path;
    std::ostringstream out, err;
    REQUIRE(run_cli(opts, out, err) == 0);
    std::remove(path.c_str());
    const json result = json::parse(out.str())["result"];
    CHECK(result["perfect"] == false);
    CHECK(result["sound"] == true);
    CHECK(result["overall_success"].get<double>() ==
          doctest::Approx(0.05));
  }

  SUBCASE("input problems exit with code 2") {
    const auto run = [](CliOptions opts) {
      std::ostringstream out, err;
      const int rc = run_cli(opts, out, err);
      CHECK_FALSE(err.str().empty());
      return rc;
    };

    CliOptions bad_format;
    bad_format.command = "classify";
    bad_format.input = std::string(OPSD_FIXTURE_DIR) + "/eq11.json";
    bad_format.format = "yaml";
    CHECK(run(bad_format) == 2);

    CliOptions no_input;
    no_input.command = "classify";
    CHECK(run(no_input) == 2);

    CliOptions missing_file;
    missing_file.command = "classify";
    missing_file.input = "does_not_exist.json";
    CHECK(run(missing_file) == 2);

    CliOptions unknown_demo;
    unknown_demo.command = "demo";
    unknown_demo.demo = "eq99";
    CHECK(run(unknown_demo) == 2);

    CliOptions bad_depth;
    bad_depth.command = "demo";
    bad_depth.demo = "eq3";
    bad_depth.depth = 0;
    CHECK(run(bad_depth) == 2);
    bad_depth.depth = 33;
    CHECK(run(bad_depth) == 2);

    CliOptions bad_tol;
    bad_tol.command = "demo";
    bad_tol.demo = "eq3";
    bad_tol.tol = 0.5;
    CHECK(run(bad_tol) == 2);
  }

  SUBCASE("--output writes the report to a file") {
    CliOptions opts;
    opts.command = "classify";
    opts.input = fixture_dir + "/eq3.json";
    opts.output = "io_test_report.json";
    std::ostringstream out, err;
    REQUIRE(run_cli(opts, out, err) == 0);
    CHECK(out.str().empty());
    std::ifstream file(opts.output);
    REQUIRE(file.good());
    const json report = json::parse(file);
    file.close();
    std::remove(opts.output.c_str());
    CHECK(report["result"]["pattern"] == "Cycle54");
  }
}

TEST_CASE("demo payloads expose the family numbers") {
  SynthesisOptions opts;

  SUBCASE("the probe demo reports the closed forms next to the run") {
    const json result = cmd_demo("theorem4-1", opts);
    CHECK(result["demo"] == "theorem4-1");
    CHECK(result["closed_form"]["overall_success"].get<double>() ==
          doctest::Approx(0.05));
    CHECK(result["closed_form"]["success"][2].get<double>() ==
          doctest::Approx(0.25));
    CHECK(result["probe_outcome_probabilities"][2].get<double>() ==
          doctest::Approx(0.25));
    CHECK(result["simulation"]["overall_success"].get<double>() ==
          doctest::Approx(0.05));
  }

  SUBCASE("the measurement demo lists survivors per outcome") {
    const json result = cmd_demo("eq12", opts);
    CHECK(result["completeness_residual"].get<double>() <= 1e-12);
    CHECK(result["survivors"] ==
          json::parse("[[1,2,3],[1,3,4],[1,2,5],[1,4,5]]"));
    CHECK(result["measurement"]["party"] == 3);
    CHECK(result["measurement"]["kraus"].size() == 4);
  }

  SUBCASE("the tripartite demos split by distinguishability") {
    CHECK(cmd_demo("eq10", opts)["verdict"] == "IndistinguishableCertified");
    CHECK(cmd_demo("eq11", opts)["verdict"] == "Perfect");
    CHECK_THROWS_AS(cmd_demo("eq2", opts), InputError);
  }
}

TEST_SUITE_END();
