// Command-line front end: classify, synthesize, certify, simulate,
// generate, and demo subcommands over JSON documents.

#include "opsd/io.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"orthogonal product-state discrimination toolkit"};
  app.require_subcommand(1);

  opsd::CliOptions options;

  auto add_common = [&options](CLI::App* cmd) {
    cmd->add_option("--output", options.output, "write the report to this file");
    cmd->add_option("--format", options.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--tol", options.tol,
                    "numerical tolerance override (default: the document's)");
  };
  auto add_input = [&options](CLI::App* cmd) {
    cmd->add_option("--input", options.input, "state-set JSON document")->required();
  };

  CLI::App* classify = app.add_subcommand(
      "classify", "orthogonality graph, relation vector, and structure pattern");
  add_input(classify);
  add_common(classify);

  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "search for a discrimination protocol or a certificate");
  add_input(synthesize);
  add_common(synthesize);
  synthesize->add_option("--depth", options.depth, "protocol search depth limit");

  CLI::App* certify = app.add_subcommand(
      "certify", "classify each party's orthogonality-preserving measurements");
  add_input(certify);
  add_common(certify);

  CLI::App* simulate =
      app.add_subcommand("simulate", "run a protocol document against a state set");
  add_input(simulate);
  simulate->add_option("--protocol", options.protocol, "protocol JSON document")
      ->required();
  add_common(simulate);

  CLI::App* generate = app.add_subcommand(
      "generate", "sample a product-state set realizing a graph spec");
  generate->add_option("--input", options.input, "graph-spec JSON document")->required();
  generate->add_option("--seed", options.seed, "RNG seed");
  add_common(generate);

  CLI::App* demo = app.add_subcommand("demo", "built-in worked examples");
  demo->add_option("name", options.demo,
                   "one of: eq3, eq10, eq11, theorem4-1, theorem4-2, theorem4-3, eq12")
      ->required();
  add_common(demo);
  demo->add_option("--depth", options.depth, "protocol search depth limit");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* cmd : {classify, synthesize, certify, simulate, generate, demo}) {
    if (cmd->parsed()) options.command = cmd->get_name();
  }
  return opsd::run_cli(options, std::cout, std::cerr);
}
