#pragma once

// JSON document formats (state sets, protocols, graph specs, reports) and
// the command layer behind the opsd CLI. Serialization is deterministic:
// keys are emitted in sorted order and doubles use shortest round-trip
// formatting, so identical inputs always produce byte-identical output.
// External documents index states, parties, and basis kets 1-based for
// labels and pair lists; amplitudes are [re, im] pairs.

#include "opsd/generate.hpp"
#include "opsd/synthesis.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace opsd {

using json = nlohmann::json;

// Anything wrong with user-supplied input: unreadable file, malformed
// JSON, schema violations, non-orthogonal or unnormalized states, unknown
// demo names. The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* tool_version();  // e.g. "opsd 0.1.0"

// ---- document conversions -------------------------------------------------

json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& j);

json state_set_to_json(const StateSet& set,
                       const std::vector<std::string>& labels = {});
// Throws InputError on schema violations; near-normalized locals are kept
// bit-exact, anything further off is renormalized (zero locals error out).
StateSet state_set_from_json(const json& doc,
                             std::vector<std::string>* labels = nullptr);

json protocol_to_json(const ProtocolPtr& root);
ProtocolPtr protocol_from_json(const json& doc);

// Graph-spec documents for generate: states, parties, optional dims, and
// one edge list per party (1-based vertex pairs).
OrthoGraph graph_from_json(const json& doc, std::vector<int>* dims);
json graph_to_json(const OrthoGraph& g, const std::vector<int>& dims = {});

json certificate_to_json(const Certificate& cert);

// ---- commands ---------------------------------------------------------

// Each cmd_* returns the `result` payload of the final report document.
json cmd_classify(const StateSet& set);
json cmd_synthesize(const StateSet& set, const SynthesisOptions& opts);
json cmd_certify(const StateSet& set);
json cmd_simulate(const StateSet& set, const ProtocolPtr& protocol);
json cmd_generate(const OrthoGraph& target, const std::vector<int>& dims,
                  std::uint64_t seed, double tol);
json cmd_demo(const std::string& name, const SynthesisOptions& opts);

// Fixed-parameter sets behind the demo names. Throws InputError on an
// unknown name.
StateSet demo_state_set(const std::string& name);

// ---- CLI ------------------------------------------------------------------

struct CliOptions {
  std::string command;          // classify|synthesize|certify|simulate|generate|demo
  std::string input;            // --input (state set or graph spec)
  std::string protocol;         // --protocol (simulate)
  std::string output;           // --output (default: stdout)
  std::string format = "json";  // --format json|text
  std::string demo;             // demo name argument
  std::uint64_t seed = 1;       // --seed (generate)
  int depth = 6;                // --depth (synthesize, demo)
  double tol = 0.0;             // --tol override; 0 keeps the document's value
};

std::string render_text(const json& report);

// Runs one command end to end and writes the report to `out` (or the
// --output file). Returns 0 on success (whatever the verdict), 2 on input
// errors, 3 on internal invariant violations.
int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace opsd
