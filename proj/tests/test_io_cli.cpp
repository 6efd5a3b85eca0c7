#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fga/cli.hpp"
#include "fga/io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fga;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string parse_error(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("no parse error");
  return {};
}

RunConfig config(const std::string& command, std::vector<std::string> files) {
  RunConfig cfg;
  cfg.command = command;
  for (auto& f : files) cfg.inputs.push_back(testing::demo(f));
  return cfg;
}

}  // namespace

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("graphs, covers and maps survive a write and read back") {
  Loader l;
  const MarkedGraph rose = l.graph(testing::demo("rose.graph"));
  const MarkedGraph space = l.graph(testing::demo("espace.graph"));
  for (const MarkedGraph* g : {&rose, &space}) {
    const std::string text = format_graph(*g);
    const MarkedGraph back = parse_graph(text);
    CHECK(back.num_vertices() == g->num_vertices());
    CHECK(back.num_edges() == g->num_edges());
    for (int e = 0; e < g->num_edges(); ++e) {
      CHECK(back.edge(e).name == g->edge(e).name);
      CHECK(back.edge(e).from == g->edge(e).from);
      CHECK(back.edge(e).to == g->edge(e).to);
    }
    CHECK(format_graph(back) == text);
  }
  for (const char* file : {"attach_u.cover", "attach_v.cover", "attach_w.cover", "triple.cover"}) {
    CAPTURE(file);
    const CoverMap c = l.cover(testing::demo(file), rose);
    const CoverMap back = parse_cover(format_cover(c, "copy"), rose);
    CHECK(back.degree() == c.degree());
    CHECK(back.basepoint() == c.basepoint());
    for (int e = 0; e < c.total().num_edges(); ++e) CHECK(back.label(Letter(e, false)) == c.label(Letter(e, false)));
    CHECK(format_cover(back, "copy") == format_cover(c, "copy"));
  }
  for (const char* file : {"fibonacci.map", "rank3.map", "phi.map", "phi_inv.map", "torus_phi.map"}) {
    CAPTURE(file);
    const GraphMap f = l.map(testing::demo(file));
    const GraphMap back = parse_map(format_map(f), "copy", &f.domain());
    for (int e = 0; e < f.domain().num_edges(); ++e) CHECK(back.image(Letter(e, false)) == f.image(Letter(e, false)));
    CHECK(format_map(back) == format_map(f));
  }
}

TEST_CASE("maps on a rose take their domain from the letters") {
  const GraphMap f = parse_map("map fib on rose2\na -> a b\nb -> a\n");
  CHECK(f.domain().num_edges() == 2);
  CHECK(f.image(Letter(0, false)) == oracle::parse("ab"));
  CHECK(f.image(Letter(0, true)) == oracle::parse("BA"));
  CHECK(f.image(Letter(1, false)) == oracle::parse("a"));
}

TEST_CASE("parse errors carry source and line") {
  Loader l;
  const std::string path = testing::demo("malformed.map");
  const std::string msg = parse_error([&] { l.map(path); });
  CHECK(msg.find(path + ":3:") != std::string::npos);
  const std::string inline_msg = parse_error([] { parse_graph("graph g\nvertex v\nedge e v w\n", "mem"); });
  CHECK(inline_msg.find("mem:3:") != std::string::npos);
}

TEST_CASE("the loader records a digest for every file it reads") {
  Loader l;
  l.system(testing::demo("demo.system"));
  const auto& in = l.inputs();
  REQUIRE(in.size() == 7);
  CHECK(in.front().path == testing::demo("demo.system"));
  for (const auto& d : in) {
    CAPTURE(d.path);
    CHECK(d.sha256 == sha256_hex(slurp(d.path)));
  }
}

TEST_CASE("reports start with the replay header") {
  RunConfig cfg = config("legality", {"fibonacci.map"});
  cfg.circuit = "a b";
  cfg.iters = 6;
  const CommandResult r = run_command(cfg);
  CHECK(r.exit_code == 0);
  const auto& j = r.report;
  CHECK(j["tool"] == "fga");
  CHECK(j["version"] == kToolVersion);
  CHECK(j["command"] == "legality");
  CHECK(j["seed"] == 1);
  REQUIRE(j["inputs"].size() == 1);
  CHECK(j["inputs"][0]["sha256"] == sha256_hex(slurp(testing::demo("fibonacci.map"))));
  CHECK(j["config"]["iters"] == 6);
  // circuit lengths under Fibonacci follow the Fibonacci numbers
  const std::size_t fib[] = {2, 3, 5, 8, 13, 21, 34};
  REQUIRE(j["rows"].size() == 7);
  for (std::size_t n = 0; n < 7; ++n) CHECK(j["rows"][n]["length"] == fib[n]);
  CHECK(j["n1"] == 4);
}

TEST_CASE("text rendering is key=value lines without JSON-only fields") {
  RunConfig cfg = config("analyze", {"fibonacci.map"});
  const CommandResult r = run_command(cfg);
  const std::string text = render(r.report, OutputMode::Text);
  CHECK(text.rfind("tool=fga\n", 0) == 0);
  CHECK(text.find("bcc_bound=3\n") != std::string::npos);
  CHECK(text.find("turn_table") == std::string::npos);
  CHECK(text.find("[strata]\n") != std::string::npos);
  const auto back = nlohmann::ordered_json::parse(render(r.report, OutputMode::Json));
  CHECK(back == r.report);
}

TEST_CASE("independence report on the demo and control systems") {
  RunConfig cfg = config("independence", {"demo.system"});
  cfg.depth = 16;
  const CommandResult demo = run_command(cfg);
  CHECK(demo.exit_code == 0);
  CHECK(demo.report["summary"] == "independent-to-depth");
  const auto& pair = demo.report["vertices"][0]["pairs"][0];
  CHECK(pair["cells"] == 24);
  CHECK(pair["inconclusive"] == 0);

  cfg = config("independence", {"self_paired.system"});
  cfg.depth = 16;
  const CommandResult self = run_command(cfg);
  CHECK(self.report["summary"] == "dependent");
  CHECK_FALSE(self.report["vertices"][0]["pairs"][0]["witness"].is_null());
}

TEST_CASE("flare with no samples fails the exponent search") {
  RunConfig cfg = config("flare", {"demo.system"});
  cfg.samples = 0;
  cfg.candidates = {4};
  cfg.m_max = 3;
  CHECK(run_command(cfg).exit_code == 1);
}

TEST_CASE("sampling commands replay from the seed") {
  RunConfig cfg = config("flare", {"demo.system"});
  cfg.samples = 20;
  cfg.candidates = {2, 4};
  cfg.m_max = 4;
  const std::string a = render(run_command(cfg).report, OutputMode::Json);
  CHECK(a == render(run_command(cfg).report, OutputMode::Json));
  cfg.seed = 2;
  CHECK(a != render(run_command(cfg).report, OutputMode::Json));

  RunConfig st = config("stretch", {"three_ends.system"});
  st.vertex = "x";
  st.samples = 10;
  st.m_max = 3;
  st.lengths = {4, 8};
  CHECK(render(run_command(st).report, OutputMode::Json) == render(run_command(st).report, OutputMode::Json));
}

TEST_CASE("unusable input is an error, not a report") {
  RunConfig cfg = config("legality", {"fibonacci.map"});
  cfg.circuit = "ab";
  cfg.iters = 2;
  CHECK_THROWS_AS(run_command(cfg), Error);
  CHECK_THROWS_AS(run_command(config("independence", {"bad_cover.system"})), Error);
  CHECK_THROWS_AS(run_command(config("nothing", {"fibonacci.map"})), Error);
  RunConfig three = config("stretch", {"demo.system"});
  three.vertex = "nowhere";
  CHECK_THROWS_AS(run_command(three), Error);
}
