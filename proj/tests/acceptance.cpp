// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "fga/cli.hpp"
#include "fga/cover.hpp"
#include "fga/io.hpp"
#include "fga/laminations.hpp"
#include "fga/legality.hpp"
#include "fga/regluing.hpp"
#include "oracles.hpp"
#include "profiles.hpp"
#include "support.hpp"

using namespace fga;
using nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t failures = 0;

  // summary first, then the recorded failures
  void summarize(const std::string& text) { detail = text + (detail.empty() ? "" : "; " + detail); }

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 5) detail += (detail.empty() ? "" : "; ") + what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* kMaps[] = {"fibonacci.map", "rank3.map", "torus_phi.map", "torus_phi_inv.map",
                       "phi.map",       "phi_inv.map", "identity.map"};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig demo_config(const std::string& command, const std::string& file) {
  RunConfig cfg;
  cfg.command = command;
  cfg.inputs = {testing::demo(file)};
  return cfg;
}

// Rebuilds a RunConfig from the replay header of a report.
RunConfig from_report(const ordered_json& r) {
  RunConfig cfg;
  cfg.command = r["command"].get<std::string>();
  cfg.inputs = {r["inputs"][0]["path"].get<std::string>()};
  cfg.seed = r["seed"].get<std::uint64_t>();
  const ordered_json& c = r["config"];
  auto take = [&](const char* key, auto& field) {
    if (c.contains(key)) field = c[key].get<std::remove_reference_t<decltype(field)>>();
  };
  take("power", cfg.power);
  take("depth", cfg.depth);
  take("auto_double", cfg.auto_double);
  take("samples", cfg.samples);
  take("m_max", cfg.m_max);
  take("lambda", cfg.lambda);
  take("girth", cfg.girth);
  take("candidates", cfg.candidates);
  take("lengths", cfg.lengths);
  take("word_min", cfg.word_min);
  take("word_max", cfg.word_max);
  take("vertex", cfg.vertex);
  take("circuit", cfg.circuit);
  take("iters", cfg.iters);
  take("factor", cfg.factor);
  if (c.contains("mode")) cfg.mode = c["mode"] == "legal" ? LegMode::Legal : LegMode::Leaf;
  return cfg;
}

std::vector<Word> images_of(const GraphMap& f) {
  std::vector<Word> out;
  for (int e = 0; e < f.domain().num_edges(); ++e) out.push_back(f.image(Letter(e, false)));
  return out;
}

Outcome words_suite() {
  Outcome o;
  const MarkedGraph r = testing::rose3();
  SplitMix64 rng(101);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const Word w = oracle::random_word(3, rng.below(30), rng);
    const EdgePath t = tighten(r, {0, w});
    o.expect(t.letters == oracle::reduce(w) && tighten(r, t) == t, "tighten " + oracle::show(w));

    const EdgePath p{0, oracle::random_word(3, rng.below(12), rng)};
    const EdgePath q{0, oracle::random_word(3, rng.below(12), rng)};
    const EdgePath s{0, oracle::random_word(3, rng.below(12), rng)};
    const EdgePath left = concat_tighten(r, concat_tighten(r, p, q), s);
    const EdgePath right = concat_tighten(r, p, concat_tighten(r, q, s));
    o.expect(left == right && left.letters == oracle::reduce(oracle::concat(oracle::concat(p.letters, q.letters), s.letters)),
             "associativity");

    const Word c = oracle::random_word(3, 1 + rng.below(20), rng);
    const Word u = oracle::random_reduced_word(3, rng.below(6), rng);
    Word rotated = c;
    std::rotate(rotated.begin(), rotated.begin() + static_cast<std::ptrdiff_t>(rng.below(c.size())), rotated.end());
    const Word conj = oracle::concat(oracle::concat(u, rotated), oracle::inverse(u));
    const Circuit canon = cyclically_reduce(Circuit{c});
    o.expect(canon.letters == oracle::canonical_circuit(c) && cyclically_reduce(Circuit{conj}) == canon &&
                 cyclically_reduce(canon) == canon,
             "cyclic " + oracle::show(c));
  }
  o.summarize(std::to_string(3 * n) + " cases");
  return o;
}

Outcome covering_suite() {
  Outcome o;
  Loader l;
  const MarkedGraph rose = l.graph(testing::demo("rose.graph"));
  std::size_t paths = 0;
  for (const char* file : {"attach_u.cover", "attach_v.cover", "attach_w.cover", "triple.cover"}) {
    const CoverMap c = l.cover(testing::demo(file), rose);
    o.expect(c.total().rank() - 1 == c.degree() * (rose.rank() - 1), std::string("euler ") + file);
    SplitMix64 rng(202);
    for (int i = 0; i < 10000; ++i, ++paths) {
      const Word w = oracle::random_reduced_word(3, rng.below(40), rng);
      const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.degree())));
      const EdgePath lift = lift_path(c, {0, w}, start);
      o.expect(lift.start == start && lift.size() == w.size() && project_path(c, lift).letters == w &&
                   is_reduced(lift.letters),
               std::string("lift ") + file);
      const Word up = random_reduced_path(c.total(), start, rng.below(40), rng);
      const EdgePath down = project_path(c, {start, up});
      o.expect(down.size() == up.size() && lift_path(c, down, start).letters == up, std::string("project ") + file);
    }
  }
  o.summarize(std::to_string(2 * paths) + " paths over degree 2 and 3 covers");
  return o;
}

Outcome graph_map_suite() {
  Outcome o;
  Loader l;
  std::size_t triples = 0;
  for (const char* file : {"fibonacci.map", "rank3.map", "torus_phi.map", "phi.map", "phi_inv.map"}) {
    const GraphMap f = l.map(testing::demo(file));
    const MarkedGraph& g = f.domain();
    const auto images = images_of(f);
    SplitMix64 rng(303);
    for (int i = 0; i < 2000; ++i, ++triples) {
      const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.num_vertices())));
      const EdgePath p{start, random_reduced_path(g, start, rng.below(10), rng)};
      const int m = static_cast<int>(rng.below(4)), k = static_cast<int>(rng.below(4));
      const EdgePath whole = iterate(f, p, m + k);
      o.expect(iterate(f, iterate(f, p, m), k) == whole && whole.letters == oracle::substitute_n(images, p.letters, m + k),
               std::string("semigroup ") + file);
    }
    // turns against a walk of the direction-map orbit
    const TurnTable t = turn_analysis(f);
    std::vector<Letter> dmap;
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(g.num_letters()); ++c)
      dmap.push_back(f.image(Letter::from_code(c)).front());
    for (int v = 0; v < g.num_vertices(); ++v)
      for (Letter x : g.directions_at(v))
        for (Letter y : g.directions_at(v))
          if (x < y) o.expect(t.is_legal(x, y) == oracle::turn_legal(dmap, x, y), std::string("turn ") + file);
  }
  const GraphMap fib = l.map(testing::demo("fibonacci.map"));
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const TransitionMatrix m = transition_matrix(fib, {0, 1});
  const double pf = pf_eigenvalue(m).value;
  o.expect(std::abs(pf - golden) < 1e-7, "fibonacci pf");
  for (const char* file : {"fibonacci.map", "rank3.map", "phi.map"}) {
    const GraphMap f = l.map(testing::demo(file));
    const Filtration filt = compute_filtration(f);
    for (int r : filt.eg_strata()) {
      const TransitionMatrix base = transition_matrix(f, filt.strata[static_cast<std::size_t>(r)].edges);
      const double lambda = pf_eigenvalue(base).value;
      TransitionMatrix mk = base;
      for (int k = 2; k <= 5; ++k) {
        mk = multiply(mk, base);
        o.expect(std::abs(pf_eigenvalue(mk).value - std::pow(lambda, k)) < 1e-6, std::string("pf power ") + file);
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, ", |pf - golden| = %.1e", std::abs(pf - golden));
  o.summarize(std::to_string(triples) + " triples" + buf);
  return o;
}

Outcome cancellation_suite() {
  Outcome o;
  Loader l;
  std::size_t worst_slack = ~std::size_t{0};
  for (const char* file : kMaps) {
    const GraphMap f = l.map(testing::demo(file));
    const MarkedGraph& g = f.domain();
    const auto images = images_of(f);
    const std::size_t bound = bcc_bound(f).bound;
    SplitMix64 rng(404);
    std::size_t worst = 0;
    for (int i = 0; i < 10000; ++i) {
      const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.num_vertices())));
      const Word pq = random_reduced_path(g, start, 2 + rng.below(14), rng);
      const std::size_t cut = 1 + rng.below(pq.size() - 1);
      const EdgePath p{start, Word(pq.begin(), pq.begin() + static_cast<std::ptrdiff_t>(cut))};
      const EdgePath q{terminal_vertex(g, p), Word(pq.begin() + static_cast<std::ptrdiff_t>(cut), pq.end())};
      const Word fp = oracle::substitute(images, p.letters), fq = oracle::substitute(images, q.letters);
      const std::size_t naive = (fp.size() + fq.size() - oracle::reduce(oracle::concat(fp, fq)).size()) / 2;
      const std::size_t got = junction_cancellation(f, p, q);
      o.expect(got == naive, std::string("oracle ") + file);
      o.expect(got <= bound, std::string("bound ") + file);
      worst = std::max(worst, got);
    }
    worst_slack = std::min(worst_slack, bound - std::min(bound, worst));
  }
  o.summarize("10000 junctions on each of 7 maps, smallest slack " + std::to_string(worst_slack));
  return o;
}

Outcome legality_suite() {
  Outcome o;
  const GraphMap f = testing::load_map("fibonacci.map");
  const GrowthResult g = growth_test(f, Circuit{oracle::parse("a")}, 5.0, 20);
  o.expect(g.n1 && *g.n1 == 4, "N1 != 4");
  const LegalityContext ctx(f);
  double lowest = 1.0;
  for (Letter seed : {Letter(0, false), Letter(1, false)}) {
    for (int depth : {6, 8, 10}) {
      const LeafSegment seg = leaf_segment(f, ctx.filtration(), seed, depth);
      const Circuit beta{seg.path.letters};
      const LegalityGrowth a = legality_growth_test(ctx, beta, 20);
      const LegalityGrowth b = legality_growth_test(ctx, beta, 20);
      o.expect(a.rows.size() == 21, "row count");
      for (std::size_t n = 0; n < a.rows.size(); ++n) {
        o.expect(a.rows[n].leg >= 0.9, "LEG < 0.9 at n = " + std::to_string(n));
        o.expect(a.rows[n].leg == b.rows[n].leg && a.rows[n].length == b.rows[n].length, "replay");
        lowest = std::min(lowest, a.rows[n].leg);
      }
    }
  }
  o.summarize("N1 = " + (g.n1 ? std::to_string(*g.n1) : std::string("none")) + ", min LEG over 6 circuits " +
             std::to_string(lowest));
  return o;
}

Outcome independence_fixture() {
  Outcome o;
  auto t0 = Clock::now();
  RunConfig cfg = demo_config("independence", "demo.system");
  cfg.depth = 64;
  const ordered_json demo = run_command(cfg).report;
  const double t_demo = seconds_since(t0);
  o.expect(demo["summary"] == "independent-to-depth", "demo summary " + demo["summary"].dump());
  std::size_t inconclusive = 0, cells = 0;
  for (const auto& v : demo["vertices"])
    for (const auto& p : v["pairs"]) {
      inconclusive += p["inconclusive"].get<std::size_t>();
      cells += p["cells"].get<std::size_t>();
      o.expect(p["depth"] == 64 && p["doubled"] == false, "depth");
    }
  o.expect(inconclusive == 0 && cells > 0, "inconclusive cells");
  o.expect(t_demo < 60, "demo slow");

  t0 = Clock::now();
  cfg = demo_config("independence", "self_paired.system");
  cfg.depth = 64;
  const ordered_json self = run_command(cfg).report;
  const double t_self = seconds_since(t0);
  o.expect(self["summary"] == "dependent", "self_paired summary " + self["summary"].dump());
  bool witness = false;
  for (const auto& v : self["vertices"])
    for (const auto& p : v["pairs"]) witness = witness || !p["witness"].is_null();
  o.expect(witness, "no witness");
  o.expect(t_self < 60, "self_paired slow");
  char buf[160];
  std::snprintf(buf, sizeof buf, "demo %zu cells, %zu inconclusive (%.2fs); self_paired dependent (%.2fs)", cells,
                inconclusive, t_demo, t_self);
  o.summarize(buf);
  return o;
}

Outcome concatenation_suite() {
  Outcome o;
  const profiles::Model model;
  const std::size_t n = model.overlap_min();
  SplitMix64 rng(707);
  std::size_t checked = 0, drawn = 0;
  while (checked < 100000) {
    ++drawn;
    const auto s = model.hallway(rng);
    const auto w = profiles::windows(s.profile.size(), n, s.profile.size(), rng);
    if (!w) continue;
    const ConcatenationCheck c = concatenation_check(s.profile, w->first, w->second, n);
    const bool naive = profiles::flares(s.profile, w->first.begin, w->first.end) &&
                       profiles::flares(s.profile, w->second.begin, w->second.end);
    o.expect(c.hypotheses == naive, "hypotheses disagree with the naive check");
    if (!c.hypotheses) continue;
    ++checked;
    o.expect(c.conclusion, "union does not flare");
  }
  // the same predicate on hallways sampled from the demo system
  const LoadedSystem sys = testing::load_system("demo.system");
  RegluingSpec spec = sys.spec;
  for (auto& e : spec.edges) e.exponent = 4;
  const HallwayEngine engine(sys.graph, spec);
  std::size_t sampled = 0;
  for (std::size_t i = 0; i < 4000; ++i) {
    const auto lengths = sample_hallway(engine, 12, 1, i, 16, 40).profile();
    const std::vector<double> p(lengths.begin(), lengths.end());
    for (int k = 0; k < 5; ++k) {
      const auto w = profiles::windows(p.size(), n, p.size(), rng);
      if (!w) continue;
      const ConcatenationCheck c = concatenation_check(p, w->first, w->second, n);
      if (!c.hypotheses) continue;
      ++sampled;
      o.expect(c.conclusion, "sampled hallway " + std::to_string(i));
    }
  }
  std::size_t constructed = 0;
  for (std::size_t h = 2; h <= 16; ++h)
    for (std::size_t ov = 1; ov < std::min(n, 2 * h - 1); ++ov) {
      profiles::Pair w;
      const auto p = profiles::counterexample(h, ov, w);
      const ConcatenationCheck waived = concatenation_check(p, w.first, w.second, ov);
      o.expect(waived.hypotheses && !waived.conclusion, "counterexample h=" + std::to_string(h));
      o.expect(!concatenation_check(p, w.first, w.second, n).hypotheses, "sub-threshold accepted");
      ++constructed;
    }
  o.summarize(std::to_string(checked) + " flaring pairs from " + std::to_string(drawn) + " profiles, N = " +
             std::to_string(n) + ", " + std::to_string(sampled) + " from sampled hallways; " +
             std::to_string(constructed) + " sub-threshold constructions fail");
  return o;
}

ordered_json flare_fixture_report;
double flare_seconds = 0;

Outcome flare_fixture() {
  Outcome o;
  RunConfig cfg = demo_config("flare", "demo.system");
  cfg.seed = 1;
  cfg.candidates = {4, 8, 16, 24};
  cfg.samples = 500;
  cfg.m_max = 12;
  const auto t0 = Clock::now();
  const CommandResult first = run_command(cfg);
  flare_seconds = seconds_since(t0);
  const std::string a = render(first.report, OutputMode::Json);
  const std::string b = render(run_command(cfg).report, OutputMode::Json);
  o.expect(a == b, "replay differs");
  o.expect(first.exit_code == 0, "no candidate meets the threshold");
  const ordered_json& r = first.report;
  flare_fixture_report = r;
  o.expect(!r["smallest"].is_null(), "no smallest n");
  std::string table;
  double prev = -1;
  bool monotone = true;
  for (const auto& rep : r["reports"]) {
    const double pf = rep["pass_fraction"].get<double>();
    monotone = monotone && pf >= prev;
    prev = pf;
    table += (table.empty() ? "" : " ") + std::to_string(rep["n"].get<int>()) + ":" + std::to_string(pf).substr(0, 5);
    if (!r["smallest"].is_null() && rep["n"] == r["smallest"]) o.expect(pf == 1.0, "smallest below 1.0");
    for (const auto& row : rep["rows"])
      o.expect(row["passed"].get<std::size_t>() + row["failed"].get<std::size_t>() + row["below_girth"].get<std::size_t>() ==
                   500,
               "sample count");
  }
  o.expect(monotone && r["monotone"] == true, "table not monotone in n");
  o.expect(flare_seconds < 300, "slow");
  char buf[96];
  std::snprintf(buf, sizeof buf, "; smallest n = %s, %.1fs per run", r["smallest"].dump().c_str(), flare_seconds);
  o.summarize(table + buf);
  return o;
}

Outcome determinism() {
  Outcome o;
  std::vector<ordered_json> reports;
  if (!flare_fixture_report.is_null()) reports.push_back(flare_fixture_report);
  RunConfig st = demo_config("stretch", "demo.system");
  st.vertex = "x";
  st.samples = 50;
  reports.push_back(run_command(st).report);
  RunConfig fl = demo_config("flare", "three_ends.system");
  fl.seed = 9;
  fl.samples = 50;
  fl.candidates = {2, 3};
  fl.m_max = 6;
  reports.push_back(run_command(fl).report);
  RunConfig lg = demo_config("legality", "rank3.map");
  lg.circuit = "a b c";
  lg.iters = 10;
  reports.push_back(run_command(lg).report);
  for (const auto& r : reports) {
    const std::string what = r["command"].get<std::string>();
    for (const auto& in : r["inputs"])
      o.expect(in["sha256"] == sha256_hex(slurp(in["path"].get<std::string>())), "digest " + in["path"].dump());
    const ordered_json again = run_command(from_report(r)).report;
    o.expect(render(again, OutputMode::Json) == render(r, OutputMode::Json), what + " replay differs");
  }
  // hallway samples depend on (seed, index) only, not on the order of draws
  const LoadedSystem sys = testing::load_system("demo.system");
  const HallwayEngine engine(sys.graph, sys.spec);
  for (std::size_t i = 0; i < 200; ++i) {
    const std::size_t j = 199 - i;
    o.expect(sample_hallway(engine, 6, 5, j, 16, 40).profile() == sample_hallway(engine, 6, 5, j, 16, 40).profile(),
             "hallway sample");
  }
  o.summarize(std::to_string(reports.size()) + " reports rebuilt from their headers and replayed byte for byte");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"word algebra", words_suite},
      {"covering", covering_suite},
      {"graph maps", graph_map_suite},
      {"bounded cancellation", cancellation_suite},
      {"legality and growth", legality_suite},
      {"independence fixture", independence_fixture},
      {"flare concatenation", concatenation_suite},
      {"flare fixture", flare_fixture},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summarize(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (index == 1 && secs >= 10) o.expect(false, "over 10 s");
    std::printf("criterion %d %-22s %s  %s (%.2fs)\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
