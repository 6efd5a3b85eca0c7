#include <cmath>
#include <set>

#include "doctest.h"
#include "fga/graph_map.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fga;

namespace {

std::vector<Word> rose_images(const GraphMap& f) {
  std::vector<Word> out;
  for (int e = 0; e < f.domain().num_edges(); ++e) out.push_back(f.image(Letter(e, false)));
  return out;
}

// Canonical circuits up to max_len by brute force over all words.
std::set<Word> all_circuits(int rank, int max_len) {
  std::set<Word> out;
  std::vector<Word> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(2 * rank); ++c) {
        Word x = w;
        x.push_back(Letter::from_code(c));
        next.push_back(x);
        const Word can = oracle::canonical_circuit(x);
        if (can.size() == x.size()) out.insert(can);
      }
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("images of inverse letters are reversed inverse words") {
  const GraphMap f = testing::load_map("fibonacci.map");
  CHECK(f.image(Letter(0, true)) == oracle::parse("BA"));
  CHECK(f.lipschitz() == 2);
  CHECK(f.is_self_map());
}

TEST_CASE("application matches substitution on rose maps") {
  for (const char* file : {"fibonacci.map", "rank3.map", "torus_phi.map", "torus_phi_inv.map"}) {
    CAPTURE(file);
    const GraphMap f = testing::load_map(file);
    const auto images = rose_images(f);
    const int rank = f.domain().num_edges();
    SplitMix64 rng(21);
    for (int i = 0; i < 300; ++i) {
      const Word w = oracle::random_reduced_word(rank, rng.below(15), rng);
      const int k = static_cast<int>(rng.below(4));
      CHECK(iterate(f, EdgePath{0, w}, k).letters == oracle::substitute_n(images, w, k));
      CHECK(iterate(f, Circuit{w}, k).letters == oracle::canonical_circuit(oracle::substitute_n(images, w, k)));
    }
  }
}

TEST_CASE("iteration is a semigroup action") {
  const GraphMap f = testing::load_map("phi.map");
  const MarkedGraph& g = f.domain();
  SplitMix64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const int start = static_cast<int>(rng.below(2));
    EdgePath q{start, {}};
    for (int j = 0; j < 8; ++j) {
      const int at = terminal_vertex(g, q);
      const auto& dirs = g.directions_at(at);
      const Letter l = dirs[rng.below(dirs.size())];
      if (!q.letters.empty() && l == q.letters.back().inverse()) continue;
      q.letters.push_back(l);
    }
    const int m = static_cast<int>(rng.below(4));
    const int n = static_cast<int>(rng.below(4));
    CHECK(iterate(f, iterate(f, q, n), m) == iterate(f, q, m + n));
    CHECK(apply(power(f, m + 1), q) == iterate(f, q, m + 1));
  }
}

TEST_CASE("composition with the inverse representative is the identity on edges") {
  const GraphMap f = testing::load_map("phi.map");
  const GraphMap g = testing::load_map("phi_inv.map");
  const GraphMap h = compose(g, f);
  for (int e = 0; e < f.domain().num_edges(); ++e) CHECK(h.image(Letter(e, false)) == Word{Letter(e, false)});
}

TEST_CASE("Fibonacci transition matrix and eigenvalue") {
  const GraphMap f = testing::load_map("fibonacci.map");
  const TransitionMatrix m = transition_matrix(f, {0, 1});
  CHECK(m.entries == std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 0}});
  CHECK(m.is_irreducible());
  const PfEstimate pf = pf_eigenvalue(m);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(pf.value - golden) < 1e-7);
  CHECK(pf.lower <= pf.value);
  CHECK(pf.value <= pf.upper);
  TransitionMatrix mk = m;
  for (int k = 2; k <= 5; ++k) {
    mk = multiply(mk, m);
    CHECK(std::abs(pf_eigenvalue(mk).value - std::pow(golden, k)) < 1e-6);
  }
}

TEST_CASE("power of a map has the powered eigenvalue") {
  const GraphMap f = testing::load_map("rank3.map");
  const double l1 = compute_filtration(f).strata.back().pf.value;
  // plastic number, the real root of x^3 = x + 1
  CHECK(std::abs(l1 * l1 * l1 - l1 - 1.0) < 1e-8);
  const double l3 = compute_filtration(power(f, 3)).strata.back().pf.value;
  CHECK(std::abs(l3 - l1 * l1 * l1) < 1e-6);
}

TEST_CASE("reducible matrices are refused") {
  TransitionMatrix m;
  m.edges = {0, 1};
  m.entries = {{1, 1}, {0, 1}};
  CHECK_FALSE(m.is_irreducible());
  CHECK_THROWS_AS(pf_eigenvalue(m), Error);
}

TEST_CASE("filtrations classify strata") {
  const Filtration fib = compute_filtration(testing::load_map("fibonacci.map"));
  REQUIRE(fib.eg_strata().size() == 1);
  CHECK(fib.strata[static_cast<std::size_t>(fib.eg_strata()[0])].edges.size() == 2);

  const Filtration id = compute_filtration(testing::load_map("identity.map"));
  CHECK(id.eg_strata().empty());
  for (const auto& s : id.strata) CHECK(s.cls == StratumClass::NEGFixed);

  const GraphMap phi = testing::load_map("phi.map");
  const Filtration fp = compute_filtration(phi);
  REQUIRE(fp.eg_strata().size() == 1);
  const int r = fp.eg_strata()[0];
  CHECK(fp.strata[static_cast<std::size_t>(r)].edges.size() == 5);
  CHECK(fp.height(phi.domain().parse_letter("a0")) < r);
  CHECK(fp.strata[static_cast<std::size_t>(fp.height(phi.domain().parse_letter("a0")))].cls == StratumClass::NEGFixed);
  // lower strata are invariant
  for (int e = 0; e < phi.domain().num_edges(); ++e)
    for (Letter l : phi.image(Letter(e, false))) CHECK(fp.height(l) <= fp.height(Letter(e, false)));
}

TEST_CASE("turn verdicts agree with direct orbit walks") {
  for (const char* file : {"fibonacci.map", "rank3.map", "phi.map", "phi_inv.map", "identity.map", "torus_phi.map"}) {
    CAPTURE(file);
    const GraphMap f = testing::load_map(file);
    const MarkedGraph& g = f.domain();
    const TurnTable t = turn_analysis(f);
    std::vector<Letter> dmap;
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(g.num_letters()); ++c)
      dmap.push_back(f.image(Letter::from_code(c)).front());
    CHECK(t.direction_map == dmap);
    std::size_t illegal = 0;
    for (int v = 0; v < g.num_vertices(); ++v)
      for (Letter x : g.directions_at(v))
        for (Letter y : g.directions_at(v)) {
          if (!(x < y)) continue;
          const bool legal = oracle::turn_legal(dmap, x, y);
          CHECK(t.is_legal(x, y) == legal);
          CHECK(t.is_legal(y, x) == legal);
          illegal += legal ? 0 : 1;
        }
    CHECK(t.illegal_count() == illegal);
    for (Letter d : t.fixed_directions) CHECK(dmap[d.code()] == d);
  }
}

TEST_CASE("Fibonacci is a train track; the demo map is not") {
  const GraphMap fib = testing::load_map("fibonacci.map");
  CHECK(verify_rtt(fib, compute_filtration(fib)).passed());
  const GraphMap phi = testing::load_map("phi.map");
  const RttReport r = verify_rtt(phi, compute_filtration(phi));
  CHECK_FALSE(r.passed());
  bool preserved = true;
  for (const auto& s : r.strata) preserved = preserved && s.directions_preserved;
  CHECK_FALSE(preserved);
}

TEST_CASE("illegal turn positions are the illegal junctions") {
  const GraphMap fib = testing::load_map("fibonacci.map");
  const TurnTable t = turn_analysis(fib);
  const Filtration filt = compute_filtration(fib);
  // B a: turn (b, a) degenerates since both start with a
  CHECK(illegal_turn_positions(t, filt, oracle::parse("Ba")) == std::vector<std::size_t>{1});
  CHECK(illegal_turn_positions(t, filt, oracle::parse("ab")).empty());
}

TEST_CASE("pi1 check accepts automorphisms and rejects a non-surjection") {
  CHECK(pi1_check(testing::load_map("phi.map")).isomorphism);
  CHECK(pi1_check(testing::load_map("fibonacci.map")).isomorphism);
  const MarkedGraph r = MarkedGraph::rose({"a", "b"}, "r2");
  const GraphMap sq(r, r, {0}, {oracle::parse("aa"), oracle::parse("b")});
  const Pi1Report rep = pi1_check(sq);
  CHECK_FALSE(rep.isomorphism);
  CHECK(rep.image_index_vertices == 2);
}

TEST_CASE("unreduced or empty images are rejected") {
  const MarkedGraph r = MarkedGraph::rose({"a", "b"}, "r2");
  CHECK_THROWS_AS(GraphMap(r, r, {0}, {oracle::parse("aA"), oracle::parse("b")}), Error);
  CHECK_THROWS_AS(GraphMap(r, r, {0}, {Word{}, oracle::parse("b")}), Error);
}

TEST_CASE("circuit enumeration matches brute force") {
  const MarkedGraph r = MarkedGraph::rose({"a", "b"}, "r2");
  const auto got = enumerate_circuits(r, 5);
  const auto want = all_circuits(2, 5);
  std::set<Word> seen;
  for (const auto& c : got) seen.insert(c.letters);
  CHECK(got.size() == seen.size());
  CHECK(seen == want);
}

TEST_CASE("periodic scan matches brute-force iteration") {
  for (const char* file : {"fibonacci.map", "rank3.map", "identity.map"}) {
    CAPTURE(file);
    const GraphMap f = testing::load_map(file);
    const auto images = rose_images(f);
    const int rank = f.domain().num_edges();
    const int max_len = rank == 2 ? 5 : 4;
    std::set<std::pair<Word, int>> want;
    for (const Word& c : all_circuits(rank, max_len)) {
      Word w = c;
      for (int k = 1; k <= 12; ++k) {
        w = oracle::canonical_circuit(oracle::substitute(images, w));
        if (w == c) {
          want.insert({c, k});
          break;
        }
      }
    }
    std::set<std::pair<Word, int>> got;
    for (const auto& p : periodic_class_scan(f, max_len, 12)) got.insert({p.circuit.letters, p.period});
    CHECK(got == want);
  }
  const auto fib = periodic_class_scan(testing::load_map("fibonacci.map"), 4, 12);
  REQUIRE(fib.size() == 2);
  CHECK(fib[0].period == 2);
  CHECK(periodic_class_scan(testing::load_map("rank3.map"), 6, 12).empty());
}
