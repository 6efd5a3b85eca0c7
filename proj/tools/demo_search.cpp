// Searches for an automorphism of the index-2 subgroup of F(a, b, c) given by
// the parity of a, realized on the two-vertex cover graph, whose regluing
// gives an independent vertex configuration. Writes the demo corpus.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fga/io.hpp"
#include "fga/laminations.hpp"
#include "fga/regluing.hpp"

using namespace fga;

namespace {

// Automorphism of F_5 on generator words, with its inverse.
struct FreeAuto {
  std::vector<Word> image;
  std::vector<Word> inverse;
};

Word substitute(const Word& w, const std::vector<Word>& images) {
  Word out;
  for (Letter l : w) {
    const Word& im = images[static_cast<std::size_t>(l.edge())];
    if (l.inverted()) {
      for (auto it = im.rbegin(); it != im.rend(); ++it) out.push_back(it->inverse());
    } else {
      out.insert(out.end(), im.begin(), im.end());
    }
  }
  return free_reduce(out);
}

FreeAuto random_auto(int rank, int moves, SplitMix64& rng) {
  FreeAuto a;
  for (int i = 0; i < rank; ++i) {
    a.image.push_back({Letter(i, false)});
    a.inverse.push_back({Letter(i, false)});
  }
  for (int k = 0; k < moves; ++k) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(rank)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(rank - 1)));
    if (j >= i) ++j;
    std::vector<Word> mu;
    std::vector<Word> mu_inv;
    for (int x = 0; x < rank; ++x) {
      mu.push_back({Letter(x, false)});
      mu_inv.push_back({Letter(x, false)});
    }
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    switch (rng.below(4)) {
      case 0:
        std::swap(mu[ui], mu[uj]);
        std::swap(mu_inv[ui], mu_inv[uj]);
        break;
      case 1:
        mu[ui] = mu_inv[ui] = {Letter(i, true)};
        break;
      default: {
        // x_i -> x_i y or y x_i with y = x_j^(+-1)
        const Letter y(j, rng.below(2) == 1);
        const bool right = rng.below(2) == 1;
        mu[ui] = right ? Word{Letter(i, false), y} : Word{y, Letter(i, false)};
        mu_inv[ui] = right ? Word{Letter(i, false), y.inverse()} : Word{y.inverse(), Letter(i, false)};
      }
    }
    // theta <- theta . mu and theta^-1 <- mu^-1 . theta^-1
    for (auto& w : mu) w = substitute(w, a.image);
    a.image = mu;
    for (auto& v : a.inverse) v = substitute(v, mu_inv);
  }
  return a;
}

MarkedGraph demo_rose() {
  MarkedGraph g = MarkedGraph::rose({"a", "b", "c"}, "rose");
  return g;
}

MarkedGraph demo_space() {
  MarkedGraph g("espace");
  g.add_vertex("0");
  g.add_vertex("1");
  g.add_edge("a0", 0, 1);
  g.add_edge("a1", 1, 0);
  g.add_edge("b0", 0, 0);
  g.add_edge("b1", 1, 1);
  g.add_edge("c0", 0, 0);
  g.add_edge("c1", 1, 1);
  return g;
}

CoverMap demo_cover(const std::vector<int>& sigma) {
  const MarkedGraph g = demo_space();
  std::vector<Letter> labels;
  for (int base : {0, 0, 1, 1, 2, 2}) labels.push_back(Letter(sigma[static_cast<std::size_t>(base)], false));
  return CoverMap(g, demo_rose(), labels, 0);
}

// Graph map fixing the tree edge a0 and realizing theta on the loops
// x_e = T_from e T_to^-1, generators in edge order a1 b0 b1 c0 c1.
GraphMap realize(const MarkedGraph& g, const std::vector<Word>& theta, const std::string& name) {
  const Letter t(0, false);
  auto tree = [&](int v) { return v == 0 ? Word{} : Word{t}; };
  std::vector<Word> loops;
  for (int e = 1; e < g.num_edges(); ++e) {
    Word w = tree(g.edge(e).from);
    w.push_back(Letter(e, false));
    const Word back = inverse_word(tree(g.edge(e).to));
    w.insert(w.end(), back.begin(), back.end());
    loops.push_back(w);
  }
  std::vector<Word> images{{t}};
  for (int e = 1; e < g.num_edges(); ++e) {
    Word w = inverse_word(tree(g.edge(e).from));
    const Word mid = substitute(theta[static_cast<std::size_t>(e - 1)], loops);
    w.insert(w.end(), mid.begin(), mid.end());
    const Word end = tree(g.edge(e).to);
    w.insert(w.end(), end.begin(), end.end());
    images.push_back(free_reduce(w));
  }
  return GraphMap(g, g, {0, 1}, images, name);
}

std::optional<double> single_eg(const GraphMap& f, double lambda_max) {
  const Filtration filt = compute_filtration(f);
  const auto eg = filt.eg_strata();
  if (eg.size() != 1) return std::nullopt;
  const Stratum& s = filt.strata[static_cast<std::size_t>(eg[0])];
  if (s.edges.size() + 1 != static_cast<std::size_t>(f.domain().num_edges())) return std::nullopt;
  if (s.pf.value > lambda_max) return std::nullopt;
  const TurnTable turns = turn_analysis(f);
  for (Letter d : turns.fixed_directions)
    if (filt.height(d) == eg[0]) return s.pf.value;
  return std::nullopt;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search for the demo edge automorphism"};
  std::uint64_t first = 1;
  int attempts = 20000;
  int moves_min = 4;
  int moves_max = 9;
  double lambda_max = 1.9;
  std::size_t depth = 64;
  int scan_len = 4;
  std::string out_dir;
  app.add_option("--first", first, "first attempt seed");
  app.add_option("--attempts", attempts);
  app.add_option("--moves-min", moves_min);
  app.add_option("--moves-max", moves_max);
  app.add_option("--lambda-max", lambda_max);
  app.add_option("--depth", depth);
  app.add_option("--scan-len", scan_len);
  app.add_option("--out", out_dir, "write the corpus here");
  CLI11_PARSE(app, argc, argv);

  const MarkedGraph space = demo_space();
  const std::vector<int> sigma{1, 2, 0};  // attach_v labels a b c as b c a
  const CoverMap cu = demo_cover({0, 1, 2});
  const CoverMap cv = demo_cover(sigma);

  for (int k = 0; k < attempts; ++k) {
    const std::uint64_t seed = first + static_cast<std::uint64_t>(k);
    SplitMix64 rng(seed);
    const int moves = moves_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(moves_max - moves_min + 1)));
    const FreeAuto theta = random_auto(5, moves, rng);
    const GraphMap phi = realize(space, theta.image, "phi");
    const GraphMap phi_inv = realize(space, theta.inverse, "phi_inv");
    const auto l1 = single_eg(phi, lambda_max);
    if (!l1) continue;
    const auto l2 = single_eg(phi_inv, lambda_max);
    if (!l2) continue;
    if (!periodic_class_scan(phi, scan_len, 12).empty()) continue;

    GraphOfRoses g;
    g.name = "demo";
    g.vertices.push_back({"x", demo_rose()});
    g.edges.push_back({"e", 0, 0, space, cu, cv});
    RegluingSpec spec;
    spec.edges.push_back({phi, phi_inv, 1});
    validate_system(g, spec);
    const auto ends = vertex_ends(g, spec, 0);
    const FamilyReport fam = family_independence(ends, depth, false);
    std::size_t inconclusive = 0;
    for (const auto& p : fam.pairs) inconclusive += p.inconclusive;
    std::cout << "seed " << seed << " moves " << moves << " lambda " << *l1 << " / " << *l2 << " independence "
              << to_string(fam.summary) << " inconclusive " << inconclusive << std::endl;
    if (fam.summary != IndependenceSummary::Independent || inconclusive != 0) continue;

    std::cout << format_map(phi) << format_map(phi_inv);
    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      write(dir / "rose.graph", format_graph(demo_rose()));
      write(dir / "espace.graph", format_graph(space));
      write(dir / "attach_u.cover", format_cover(cu, "cu"));
      write(dir / "attach_v.cover", format_cover(cv, "cv"));
      write(dir / "phi.map", format_map(phi));
      write(dir / "phi_inv.map", format_map(phi_inv));
    }
    return 0;
  }
  std::cerr << "no candidate found\n";
  return 1;
}
