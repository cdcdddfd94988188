#include "opsd/io.hpp"

#include "opsd/graph.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace opsd {

namespace {

void expect(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

void expect_document_header(const json& doc, const std::string& kind) {
  expect(doc.is_object(), "document is not a JSON object");
  expect(doc.contains("version") && doc["version"].is_string() && doc["version"] == "1",
         "document needs \"version\": \"1\"");
  expect(doc.contains("kind") && doc["kind"] == kind,
         "document needs \"kind\": \"" + kind + "\"");
}

int require_int(const json& j, const std::string& what, int lo, int hi) {
  expect(j.is_number_integer(), what + " must be an integer");
  const auto v = j.get<std::int64_t>();
  expect(v >= lo && v <= hi,
         what + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<int>(v);
}

double require_number(const json& j, const std::string& what) {
  expect(j.is_number(), what + " must be a number");
  return j.get<double>();
}

cplx amplitude_from_json(const json& j, const std::string& where) {
  expect(j.is_array() && j.size() == 2, where + " must be an [re, im] pair");
  return {require_number(j[0], where + " re"), require_number(j[1], where + " im")};
}

json amplitude_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json pairs_to_json(const std::vector<std::pair<int, int>>& pairs) {
  json out = json::array();
  for (const auto& [j, k] : pairs) out.push_back(json::array({j + 1, k + 1}));
  return out;
}

// ---- protocol nodes ---------------------------------------------------

json node_to_json(const ProtocolNode& node) {
  if (node.kind == ProtocolNode::Kind::Leaf) {
    switch (node.leaf) {
      case LeafKind::Identified:
        return json{{"state", node.identified}, {"type", "identified"}};
      case LeafKind::Ambiguous:
        return json{{"candidates", node.candidates}, {"type", "ambiguous"}};
      case LeafKind::Dead: {
        json off = json::array();
        for (const auto& [j, k] : node.offending) off.push_back(json::array({j, k}));
        return json{{"offending", off}, {"type", "dead"}};
      }
    }
  }
  json kraus = json::array();
  for (const CMat& k : node.meas.kraus) kraus.push_back(matrix_to_json(k));
  json branches = json::array();
  for (const ProtocolPtr& b : node.branches) branches.push_back(node_to_json(*b));
  return json{{"branches", branches},
              {"kraus", kraus},
              {"labels", node.meas.labels},
              {"party", node.meas.party + 1},
              {"type", "step"}};
}

ProtocolPtr node_from_json(const json& j) {
  expect(j.is_object() && j.contains("type") && j["type"].is_string(),
         "protocol node needs a \"type\" string");
  const std::string type = j["type"].get<std::string>();
  if (type == "identified") {
    expect(j.contains("state"), "identified node needs \"state\"");
    return identified_leaf(require_int(j["state"], "identified state", 1, 1 << 20));
  }
  if (type == "ambiguous") {
    std::vector<int> candidates;
    if (j.contains("candidates")) {
      expect(j["candidates"].is_array(), "ambiguous candidates must be an array");
      for (const json& c : j["candidates"]) {
        candidates.push_back(require_int(c, "candidate", 1, 1 << 20));
      }
    }
    return ambiguous_leaf(std::move(candidates));
  }
  if (type == "dead") {
    std::vector<std::pair<int, int>> offending;
    if (j.contains("offending")) {
      expect(j["offending"].is_array(), "dead offending must be an array");
      for (const json& p : j["offending"]) {
        expect(p.is_array() && p.size() == 2, "offending entries are [j, k] pairs");
        offending.emplace_back(require_int(p[0], "offending state", 1, 1 << 20),
                               require_int(p[1], "offending state", 1, 1 << 20));
      }
    }
    return dead_leaf(std::move(offending));
  }
  expect(type == "step", "unknown protocol node type \"" + type + "\"");
  expect(j.contains("party") && j.contains("kraus") && j.contains("branches"),
         "step node needs \"party\", \"kraus\", and \"branches\"");
  Measurement m;
  m.party = require_int(j["party"], "step party", 1, 64) - 1;
  expect(j["kraus"].is_array() && !j["kraus"].empty(), "step kraus must be a nonempty array");
  for (const json& k : j["kraus"]) m.kraus.push_back(matrix_from_json(k));
  if (j.contains("labels")) {
    expect(j["labels"].is_array() && j["labels"].size() == j["kraus"].size(),
           "step labels must match the outcome count");
    for (const json& l : j["labels"]) m.labels.push_back(l.get<std::string>());
  } else {
    for (size_t i = 0; i < m.kraus.size(); ++i) m.labels.push_back(std::to_string(i));
  }
  const int dim = m.dim();
  for (const CMat& k : m.kraus) {
    expect(k.rows() == dim && k.cols() == dim, "step kraus operators must share one square shape");
  }
  expect(j["branches"].is_array() && j["branches"].size() == m.kraus.size(),
         "step needs one branch per outcome");
  std::vector<ProtocolPtr> branches;
  for (const json& b : j["branches"]) branches.push_back(node_from_json(b));
  return step(std::move(m), std::move(branches));
}

// ---- rendering helpers ------------------------------------------------

std::string fmt_list(const json& numbers) {
  std::string out = "(";
  for (size_t i = 0; i < numbers.size(); ++i) {
    if (i > 0) out += ", ";
    out += numbers[i].dump();
  }
  return out + ")";
}

void render_protocol_lines(const json& node, const std::string& indent,
                           const std::string& branch_label, std::ostream& out) {
  const std::string head =
      branch_label.empty() ? indent : indent + "[" + branch_label + "] ";
  const std::string type = node["type"].get<std::string>();
  if (type == "identified") {
    out << head << "announce state " << node["state"].dump() << "\n";
  } else if (type == "ambiguous") {
    out << head << "stop; candidates " << fmt_list(node["candidates"]) << "\n";
  } else if (type == "dead") {
    out << head << "dead branch; non-orthogonal pairs " << node["offending"].dump() << "\n";
  } else {
    out << head << "measure party " << node["party"].dump() << "\n";
    for (size_t i = 0; i < node["branches"].size(); ++i) {
      render_protocol_lines(node["branches"][i], indent + "  ",
                            node["labels"][i].get<std::string>(), out);
    }
  }
}

void render_certificate_lines(const json& cert, std::ostream& out) {
  for (const json& p : cert["parties"]) {
    out << "party " << p["party"].dump() << ": " << p["triviality"].get<std::string>()
        << " (residual " << p["max_residual"].dump() << ", basis size "
        << p["basis_size"].dump() << ")\n";
    if (p.contains("distinguished")) {
      out << "  separates states " << fmt_list(p["distinguished"]) << "\n";
    }
  }
  out << "certified indistinguishable: "
      << (cert["certified"].get<bool>() ? "yes" : "no") << "\n";
}

// ---- command helpers --------------------------------------------------

json classification_block(const StateSet& set) {
  const OrthoGraph graph = compute_graph(set);
  const RelationVector rv = relation_vector(graph);
  const CaseId id = classify(graph);
  json edges = json::array();
  for (int party = 0; party < graph.m; ++party) {
    json list = json::array();
    for (const auto& [pair, labels] : graph.labels) {
      for (int l : labels) {
        if (l == party) list.push_back(json::array({pair.first + 1, pair.second + 1}));
      }
    }
    edges.push_back(list);
  }
  json ranks = json::array();
  for (int party = 0; party < set.parties; ++party) ranks.push_back(local_rank(set, party));
  return json{{"canonical_form", canonical_form(graph)},
              {"edges", edges},
              {"local_ranks", ranks},
              {"pattern", pattern_name(id.pattern)},
              {"relation_vector", rv.counts},
              {"relation_vector_sorted", rv.canonical}};
}

json simulation_block(const SimulationReport& report) {
  json paths = json::array();
  for (const auto& state_paths : report.paths) {
    json list = json::array();
    for (const PathRecord& rec : state_paths) {
      json entry{{"path", rec.path}, {"probability", rec.probability}};
      switch (rec.leaf) {
        case LeafKind::Identified:
          entry["leaf"] = "identified";
          entry["state"] = rec.identified;
          break;
        case LeafKind::Ambiguous: entry["leaf"] = "ambiguous"; break;
        case LeafKind::Dead: entry["leaf"] = "dead"; break;
      }
      list.push_back(std::move(entry));
    }
    paths.push_back(std::move(list));
  }
  return json{{"conservation_error", report.conservation_error},
              {"overall_success", report.overall},
              {"paths", std::move(paths)},
              {"sound", report.sound},
              {"success", report.success}};
}

FamilyParams demo_family_params(const std::string& name) {
  FamilyParams p;  // a = b = a' = b' = 1
  if (name == "theorem4-1") {
    p.d = p.dp = 1.0;
  } else if (name == "theorem4-2") {
    p.g = p.gp = 1.0;
  } else if (name == "theorem4-3") {
    p.d = p.dp = 1.0;
    p.g = p.gp = 1.0;
  } else {
    throw InputError("unknown probe demo \"" + name + "\"");
  }
  return p;
}

// Published success rates of the probe protocols, straight from the
// parameters (priors uniform over the five states).
json cycle_probe_closed_form(const FamilyParams& p, int variant) {
  const double b2 = std::norm(p.b), c2 = std::norm(p.c()), d2 = std::norm(p.d);
  const double e2 = std::norm(p.e()), g2 = std::norm(p.g);
  std::vector<double> success(5, 0.0);
  switch (variant) {
    case 1: success[2] = d2 / (1.0 + b2 + c2 + d2); break;
    case 2: success[3] = g2 / (1.0 + e2 + g2); break;
    case 3:
      success[3] = std::norm(p.d - p.g * p.b) / ((b2 + d2) * (1.0 + e2 + g2));
      success[4] = d2 / (b2 + d2);
      break;
    default: throw InputError("cycle probe variant must be 1, 2, or 3");
  }
  double overall = 0.0;
  for (double s : success) overall += s / 5.0;
  return json{{"overall_success", overall}, {"success", success}};
}

}  // namespace

const char* tool_version() { return "opsd 0.1.0"; }

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(amplitude_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  expect(j.is_array() && !j.empty(), "matrix must be a nonempty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  expect(cols > 0, "matrix rows must be nonempty arrays");
  CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < j.size(); ++r) {
    expect(j[r].is_array() && j[r].size() == cols, "matrix rows must have equal length");
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          amplitude_from_json(j[r][c], "matrix entry");
    }
  }
  return m;
}

json state_set_to_json(const StateSet& set, const std::vector<std::string>& labels) {
  json states = json::array();
  for (const ProductState& state : set.states) {
    json locals = json::array();
    for (const CVec& v : state.locals) {
      json amps = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) amps.push_back(amplitude_to_json(v(i)));
      locals.push_back(std::move(amps));
    }
    states.push_back(std::move(locals));
  }
  json doc{{"dims", set.dims},
           {"kind", "state_set"},
           {"parties", set.parties},
           {"states", std::move(states)},
           {"tol", set.tol},
           {"version", "1"}};
  if (!labels.empty()) doc["labels"] = labels;
  return doc;
}

StateSet state_set_from_json(const json& doc, std::vector<std::string>* labels) {
  expect_document_header(doc, "state_set");
  StateSet set;
  expect(doc.contains("parties"), "state set needs \"parties\"");
  set.parties = require_int(doc["parties"], "parties", 1, 16);
  expect(doc.contains("dims") && doc["dims"].is_array() &&
             doc["dims"].size() == static_cast<size_t>(set.parties),
         "\"dims\" must list one dimension per party");
  for (const json& d : doc["dims"]) set.dims.push_back(require_int(d, "dimension", 1, 64));
  if (doc.contains("tol")) {
    set.tol = require_number(doc["tol"], "tol");
    expect(set.tol > 0.0 && set.tol < 0.1, "tol must lie in (0, 0.1)");
  }
  expect(doc.contains("states") && doc["states"].is_array() && !doc["states"].empty(),
         "\"states\" must be a nonempty array");
  int index = 0;
  for (const json& state : doc["states"]) {
    ++index;
    const std::string where = "state " + std::to_string(index);
    expect(state.is_array() && state.size() == static_cast<size_t>(set.parties),
           where + " must list one local ket per party");
    ProductState product;
    for (int party = 0; party < set.parties; ++party) {
      const json& local = state[static_cast<size_t>(party)];
      const int dim = set.dims[static_cast<size_t>(party)];
      const std::string entry = where + " party " + std::to_string(party + 1);
      expect(local.is_array() && local.size() == static_cast<size_t>(dim),
             entry + " must have " + std::to_string(dim) + " amplitudes");
      CVec v(dim);
      for (int i = 0; i < dim; ++i) {
        v(i) = amplitude_from_json(local[static_cast<size_t>(i)], entry);
      }
      const double norm = v.norm();
      expect(norm > set.tol, entry + " is the zero vector");
      // Keep already-normalized data bit-exact; rescale anything sloppier.
      if (std::abs(norm - 1.0) > 1e-12) v /= norm;
      product.locals.push_back(std::move(v));
    }
    set.states.push_back(std::move(product));
  }
  if (labels != nullptr) {
    labels->clear();
    if (doc.contains("labels")) {
      expect(doc["labels"].is_array() && doc["labels"].size() == set.states.size(),
             "\"labels\" must name every state");
      for (const json& l : doc["labels"]) {
        expect(l.is_string(), "labels must be strings");
        labels->push_back(l.get<std::string>());
      }
    }
  }
  return set;
}

json protocol_to_json(const ProtocolPtr& root) {
  if (root == nullptr) throw std::invalid_argument("protocol_to_json: null protocol");
  return json{{"kind", "protocol"}, {"root", node_to_json(*root)}, {"version", "1"}};
}

ProtocolPtr protocol_from_json(const json& doc) {
  expect_document_header(doc, "protocol");
  expect(doc.contains("root"), "protocol document needs \"root\"");
  try {
    return node_from_json(doc["root"]);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed protocol: ") + e.what());
  }
}

OrthoGraph graph_from_json(const json& doc, std::vector<int>* dims) {
  expect_document_header(doc, "graph");
  OrthoGraph g;
  expect(doc.contains("states") && doc.contains("parties"),
         "graph spec needs \"states\" and \"parties\"");
  g.n = require_int(doc["states"], "states", 2, 64);
  g.m = require_int(doc["parties"], "parties", 2, 16);
  expect(doc.contains("edges") && doc["edges"].is_array() &&
             doc["edges"].size() == static_cast<size_t>(g.m),
         "\"edges\" must hold one pair list per party");
  for (int party = 0; party < g.m; ++party) {
    const json& list = doc["edges"][static_cast<size_t>(party)];
    expect(list.is_array(), "party edge lists must be arrays");
    for (const json& pair : list) {
      expect(pair.is_array() && pair.size() == 2, "edges are [j, k] state pairs");
      int j = require_int(pair[0], "edge state", 1, g.n) - 1;
      int k = require_int(pair[1], "edge state", 1, g.n) - 1;
      expect(j != k, "edges must join two distinct states");
      if (j > k) std::swap(j, k);
      std::vector<int>& labels = g.labels[{j, k}];
      if (std::find(labels.begin(), labels.end(), party) == labels.end()) {
        labels.push_back(party);
      }
    }
  }
  for (auto& [pair, labels] : g.labels) std::sort(labels.begin(), labels.end());
  if (dims != nullptr) {
    dims->clear();
    if (doc.contains("dims")) {
      expect(doc["dims"].is_array() && doc["dims"].size() == static_cast<size_t>(g.m),
             "\"dims\" must list one dimension per party");
      for (const json& d : doc["dims"]) dims->push_back(require_int(d, "dimension", 2, 64));
    }
  }
  return g;
}

json graph_to_json(const OrthoGraph& g, const std::vector<int>& dims) {
  json edges = json::array();
  for (int party = 0; party < g.m; ++party) {
    json list = json::array();
    for (const auto& [pair, labels] : g.labels) {
      for (int l : labels) {
        if (l == party) list.push_back(json::array({pair.first + 1, pair.second + 1}));
      }
    }
    edges.push_back(std::move(list));
  }
  json doc{{"edges", std::move(edges)},
           {"kind", "graph"},
           {"parties", g.m},
           {"states", g.n},
           {"version", "1"}};
  if (!dims.empty()) doc["dims"] = dims;
  return doc;
}

json certificate_to_json(const Certificate& cert) {
  json parties = json::array();
  bool certified = true;
  for (const PartyCertificate& pc : cert.parties) {
    json p{{"basis_size", pc.space.basis.size()},
           {"max_residual", pc.verdict.max_residual},
           {"pairs", pairs_to_json(pc.space.pairs)},
           {"party", pc.space.party + 1},
           {"triviality", triviality_name(pc.verdict.kind)}};
    if (pc.verdict.kind == Triviality::Informative) {
      p["distinguished"] = json::array(
          {pc.verdict.distinguished.first + 1, pc.verdict.distinguished.second + 1});
      p["witness"] = matrix_to_json(pc.verdict.witness);
    }
    certified = certified && pc.verdict.kind == Triviality::ProportionalIdentityOnSpan;
    parties.push_back(std::move(p));
  }
  return json{{"certified", certified}, {"parties", std::move(parties)}};
}

json cmd_classify(const StateSet& set) {
  const ValidationReport validation = validate(set);
  if (!validation.fully_orthogonal) {
    const auto& [j, k] = validation.violations.front();
    throw InputError("states " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                     " are not orthogonal on any party");
  }
  json result = classification_block(set);
  result["fully_orthogonal"] = validation.fully_orthogonal;
  result["unique_party"] = validation.unique_party;
  return result;
}

json cmd_synthesize(const StateSet& set, const SynthesisOptions& opts) {
  Verdict verdict;
  try {
    verdict = synthesize(set, opts);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  json result{{"classification", classification_block(set)},
              {"verdict", verdict_name(verdict.kind)}};
  switch (verdict.kind) {
    case VerdictKind::Perfect:
    case VerdictKind::Probabilistic:
      result["protocol"] = protocol_to_json(verdict.protocol);
      result["simulation"] = simulation_block(verdict.report);
      break;
    case VerdictKind::IndistinguishableCertified:
      result["certificate"] = certificate_to_json(*verdict.certificate);
      break;
    case VerdictKind::Unknown:
      result["reason"] = verdict.reason;
      result["findings"] = verdict.findings;
      break;
  }
  return result;
}

json cmd_certify(const StateSet& set) {
  const ValidationReport validation = validate(set);
  if (!validation.fully_orthogonal) {
    const auto& [j, k] = validation.violations.front();
    throw InputError("states " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                     " are not orthogonal on any party");
  }
  // Report every party's verdict, certified or not (the all-or-nothing
  // certify_indistinguishable would stop at the first informative party).
  Certificate cert;
  for (int party = 0; party < set.parties; ++party) {
    PartyCertificate pc;
    pc.space = opm_space(set, party);
    pc.verdict = classify_triviality(pc.space, set);
    cert.parties.push_back(std::move(pc));
  }
  json result = certificate_to_json(cert);
  result["residual_recheck"] = certificate_residual(cert, set);
  return result;
}

json cmd_simulate(const StateSet& set, const ProtocolPtr& protocol) {
  SimulationReport report;
  try {
    report = simulate(protocol, set);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  json result = simulation_block(report);
  result["perfect"] = verify_perfect(report, set.tol);
  return result;
}

json cmd_generate(const OrthoGraph& target, const std::vector<int>& dims,
                  std::uint64_t seed, double tol) {
  for (int j = 0; j < target.n; ++j) {
    for (int k = j + 1; k < target.n; ++k) {
      const auto it = target.labels.find({j, k});
      expect(it != target.labels.end() && !it->second.empty(),
             "graph spec leaves states " + std::to_string(j + 1) + " and " +
                 std::to_string(k + 1) + " orthogonal on no party");
    }
  }
  GenerateOptions opts;
  opts.dims = dims;
  if (tol > 0.0) opts.tol = tol;
  try {
    return state_set_to_json(generate_from_graph(target, seed, opts));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    // Infeasible graphs and undersized dims surface as generation
    // failures; they are input problems, not internal ones.
    throw InputError(e.what());
  }
}

StateSet demo_state_set(const std::string& name) {
  if (name == "eq3") return cycle_family_basic(1.0, 1.0, 1.0, 1.0);
  if (name == "eq10") return tripartite_indistinguishable_set();
  if (name == "eq11" || name == "eq12") return tripartite_distinguishable_set();
  if (name == "theorem4-1" || name == "theorem4-2" || name == "theorem4-3") {
    return cycle_family(demo_family_params(name));
  }
  throw InputError("unknown demo \"" + name +
                   "\"; valid names: eq3, eq10, eq11, theorem4-1, theorem4-2, "
                   "theorem4-3, eq12");
}

json cmd_demo(const std::string& name, const SynthesisOptions& opts) {
  const StateSet set = demo_state_set(name);
  json result{{"demo", name}, {"set", state_set_to_json(set)}};
  if (name == "eq3" || name == "eq10" || name == "eq11") {
    result.update(cmd_synthesize(set, opts));
    return result;
  }
  if (name == "eq12") {
    const Measurement m = quad_sign_split(2);
    json kraus = json::array();
    for (const CMat& k : m.kraus) kraus.push_back(matrix_to_json(k));
    json survivors = json::array();
    for (int out = 0; out < m.outcomes(); ++out) {
      json kept = json::array();
      for (int j : apply(set, m, out).kept) kept.push_back(j + 1);
      survivors.push_back(std::move(kept));
    }
    result["measurement"] =
        json{{"kraus", std::move(kraus)}, {"labels", m.labels}, {"party", m.party + 1}};
    result["completeness_residual"] = completeness_residual(m);
    result["survivors"] = std::move(survivors);
    return result;
  }
  const FamilyParams params = demo_family_params(name);
  const int variant = name.back() - '0';
  const ProtocolPtr protocol = cycle_probe_protocol(params, variant);
  const SimulationReport report = simulate(protocol, set);
  result["closed_form"] = cycle_probe_closed_form(params, variant);
  result["probe_outcome_probabilities"] =
      apply(set, cycle_probe(params, variant), 0).probabilities;
  result["protocol"] = protocol_to_json(protocol);
  result["simulation"] = simulation_block(report);
  return result;
}

std::string render_text(const json& report) {
  std::ostringstream out;
  if (report.value("kind", "") == "state_set") {
    out << "state set: " << report["states"].size() << " states, "
        << report["parties"].dump() << " parties, dims " << fmt_list(report["dims"])
        << "\n";
    return out.str();
  }
  const std::string command = report.value("command", "");
  out << report.value("tool_version", tool_version()) << " - " << command << "\n";
  if (report.contains("input")) {
    out << "input: " << report["input"].get<std::string>() << "\n";
  }
  const json& result = report["result"];
  out << "\n";
  if (result.contains("relation_vector")) {
    out << "relation vector: " << fmt_list(result["relation_vector"]) << "\n"
        << "pattern: " << result["pattern"].get<std::string>() << "\n"
        << "local ranks: " << fmt_list(result["local_ranks"]) << "\n";
    for (size_t party = 0; party < result["edges"].size(); ++party) {
      out << "party " << party + 1 << " orthogonal pairs:";
      for (const json& e : result["edges"][party]) {
        out << " (" << e[0].dump() << "," << e[1].dump() << ")";
      }
      out << "\n";
    }
  }
  if (result.contains("classification")) {
    const json& c = result["classification"];
    out << "relation vector: " << fmt_list(c["relation_vector"]) << "\n"
        << "pattern: " << c["pattern"].get<std::string>() << "\n";
  }
  if (result.contains("verdict")) {
    out << "verdict: " << result["verdict"].get<std::string>() << "\n";
  }
  if (result.contains("closed_form")) {
    out << "closed-form success per state: " << fmt_list(result["closed_form"]["success"])
        << "\noverall (closed form): " << result["closed_form"]["overall_success"].dump()
        << "\n";
  }
  if (result.contains("completeness_residual")) {
    out << "completeness residual: " << result["completeness_residual"].dump() << "\n";
    out << "outcome survivors:";
    for (const json& s : result["survivors"]) out << " " << fmt_list(s);
    out << "\n";
  }
  if (result.contains("simulation")) {
    const json& sim = result["simulation"];
    out << "success per state: " << fmt_list(sim["success"]) << "\n"
        << "overall success: " << sim["overall_success"].dump() << "\n"
        << "conservation error: " << sim["conservation_error"].dump() << "\n"
        << "sound: " << (sim["sound"].get<bool>() ? "yes" : "no") << "\n";
  }
  if (result.contains("success")) {  // simulate command payload
    out << "success per state: " << fmt_list(result["success"]) << "\n"
        << "overall success: " << result["overall_success"].dump() << "\n"
        << "conservation error: " << result["conservation_error"].dump() << "\n"
        << "sound: " << (result["sound"].get<bool>() ? "yes" : "no") << "\n"
        << "perfect: " << (result["perfect"].get<bool>() ? "yes" : "no") << "\n";
  }
  if (result.contains("protocol")) {
    out << "protocol:\n";
    render_protocol_lines(result["protocol"]["root"], "  ", "", out);
  }
  if (result.contains("certificate")) {
    render_certificate_lines(result["certificate"], out);
  }
  if (result.contains("certified")) {  // certify command payload
    render_certificate_lines(result, out);
  }
  if (result.contains("reason")) {
    out << "reason: " << result["reason"].get<std::string>() << "\n";
    for (const json& f : result["findings"]) {
      out << "  " << f.get<std::string>() << "\n";
    }
  }
  return out.str();
}

namespace {

json load_json_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot read \"" + path + "\"");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

StateSet load_state_set(const CliOptions& options) {
  if (options.input.empty()) {
    throw InputError("command \"" + options.command + "\" needs --input");
  }
  StateSet set = state_set_from_json(load_json_file(options.input));
  if (options.tol > 0.0) set.tol = options.tol;
  return set;
}

json execute(const CliOptions& options) {
  const SynthesisOptions synth{options.depth};
  json result;
  std::string input_name = options.input;
  if (options.command == "classify") {
    result = cmd_classify(load_state_set(options));
  } else if (options.command == "synthesize") {
    result = cmd_synthesize(load_state_set(options), synth);
  } else if (options.command == "certify") {
    result = cmd_certify(load_state_set(options));
  } else if (options.command == "simulate") {
    if (options.protocol.empty()) throw InputError("simulate needs --protocol");
    const StateSet set = load_state_set(options);
    result = cmd_simulate(set, protocol_from_json(load_json_file(options.protocol)));
  } else if (options.command == "generate") {
    if (options.input.empty()) throw InputError("generate needs --input (a graph spec)");
    std::vector<int> dims;
    const OrthoGraph target = graph_from_json(load_json_file(options.input), &dims);
    // generate emits a bare state-set document so its output feeds
    // directly into classify/synthesize/certify.
    return cmd_generate(target, dims, options.seed, options.tol);
  } else if (options.command == "demo") {
    if (options.demo.empty()) throw InputError("demo needs a demo name");
    input_name = options.demo;
    result = cmd_demo(options.demo, synth);
  } else {
    throw InputError("unknown command \"" + options.command + "\"");
  }
  return json{{"command", options.command}, {"input", input_name},
              {"kind", "report"},           {"result", std::move(result)},
              {"tool_version", tool_version()}, {"version", "1"}};
}

}  // namespace

int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.format != "json" && options.format != "text") {
      throw InputError("unknown format \"" + options.format + "\" (json or text)");
    }
    if (options.depth < 1 || options.depth > 32) {
      throw InputError("--depth must lie in 1..32");
    }
    if (options.tol < 0.0 || options.tol >= 0.1) {
      throw InputError("--tol must lie in (0, 0.1)");
    }
    const json report = execute(options);
    const std::string rendered =
        options.format == "text" ? render_text(report) : report.dump(2) + "\n";
    if (options.output.empty()) {
      out << rendered;
    } else {
      std::ofstream file(options.output, std::ios::binary);
      if (!file) throw InputError("cannot write \"" + options.output + "\"");
      file << rendered;
    }
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace opsd
