#include <iostream>

#include "CLI11.hpp"
#include "fga/cli.hpp"

int main(int argc, char** argv) {
  fga::RunConfig cfg;
  bool json = false;
  std::string mode = "leaf";
  std::size_t stretch_samples = 100;
  int stretch_m_max = 8;

  CLI::App app{"free group automorphisms: analysis, independence and flaring"};
  app.set_version_flag("--version", fga::kToolVersion);
  app.add_flag("--json", json, "structured output");
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "strata, turns, cancellation and periodic scan of a map");
  analyze->add_option("map", cfg.inputs, "map file")->required()->expected(1);
  analyze->add_option("--power", cfg.power, "iterate the map k times first");
  analyze->add_option("--scan-len", cfg.scan_len, "longest circuit in the periodic scan");
  analyze->add_option("--scan-iter", cfg.scan_iter, "iterates in the periodic scan");
  analyze->add_option("--rtt-length", cfg.rtt_length, "connecting path bound");
  analyze->add_option("--seed", cfg.seed);

  auto* legality = app.add_subcommand("legality", "legality and growth of a circuit under iteration");
  legality->add_option("map", cfg.inputs, "map file")->required()->expected(1);
  legality->add_option("--circuit", cfg.circuit, "cyclic word")->required();
  legality->add_option("--iters", cfg.iters, "largest iterate")->required();
  legality->add_option("--power", cfg.power);
  legality->add_option("--factor", cfg.factor, "growth factor A");
  legality->add_option("--mode", mode, "leaf or legal")->check(CLI::IsMember({"leaf", "legal"}));
  legality->add_option("--seed", cfg.seed);

  auto* independence = app.add_subcommand("independence", "fixed point independence at every base vertex");
  independence->add_option("system", cfg.inputs, "system file")->required()->expected(1);
  independence->add_option("--depth", cfg.depth, "ray comparison depth");
  independence->add_option("--power", cfg.power);
  independence->add_flag("!--no-double", cfg.auto_double, "do not rerun inconclusive pairs at twice the depth");
  independence->add_option("--seed", cfg.seed);

  auto* stretch = app.add_subcommand("stretch", "all-but-one stretch survey at a vertex");
  stretch->add_option("system", cfg.inputs, "system file")->required()->expected(1);
  stretch->add_option("--vertex", cfg.vertex, "base vertex id")->required();
  stretch->add_option("--samples", stretch_samples, "words per (length, m)");
  stretch->add_option("--m-max", stretch_m_max);
  stretch->add_option("--lengths", cfg.lengths)->delimiter(',');
  stretch->add_option("--seed", cfg.seed);
  stretch->add_option("--power", cfg.power);

  auto* flare = app.add_subcommand("flare", "exponent search with sampled special hallways");
  flare->add_option("system", cfg.inputs, "system file")->required()->expected(1);
  flare->add_option("--candidates", cfg.candidates)->delimiter(',');
  flare->add_option("--samples", cfg.samples, "hallways per (n, m)");
  flare->add_option("--m-max", cfg.m_max);
  flare->add_option("--lambda", cfg.lambda);
  flare->add_option("--girth", cfg.girth);
  flare->add_option("--word-min", cfg.word_min);
  flare->add_option("--word-max", cfg.word_max);
  flare->add_option("--seed", cfg.seed);
  flare->add_option("--power", cfg.power);

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.output = json ? fga::OutputMode::Json : fga::OutputMode::Text;
  cfg.mode = mode == "legal" ? fga::LegMode::Legal : fga::LegMode::Leaf;
  if (cfg.command == "stretch") {
    cfg.samples = stretch_samples;
    cfg.m_max = stretch_m_max;
  }

  try {
    const fga::CommandResult r = fga::run_command(cfg);
    std::cout << fga::render(r.report, cfg.output);
    return r.exit_code;
  } catch (const fga::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
