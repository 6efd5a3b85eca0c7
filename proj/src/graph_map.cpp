#include "fga/graph_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

#include "fga/cover.hpp"
#include "fga/rng.hpp"

namespace fga {

GraphMap::GraphMap(MarkedGraph domain, MarkedGraph codomain, std::vector<int> vertex_images,
                   std::vector<Word> edge_image, std::string name)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      vertex_image_(std::move(vertex_images)) {
  if (static_cast<int>(vertex_image_.size()) != domain_.num_vertices())
    throw Error(ErrorKind::Structural, "vertex image count differs from vertex count");
  if (static_cast<int>(edge_image.size()) != domain_.num_edges())
    throw Error(ErrorKind::Structural, "edge image count differs from edge count");
  for (int v : vertex_image_)
    if (v < 0 || v >= codomain_.num_vertices()) throw Error(ErrorKind::Structural, "vertex image outside codomain");
  images_.resize(static_cast<std::size_t>(domain_.num_letters()));
  for (int e = 0; e < domain_.num_edges(); ++e) {
    Word& w = edge_image[static_cast<std::size_t>(e)];
    const std::string& en = domain_.edge(e).name;
    if (w.empty()) throw Error(ErrorKind::Structural, "edge '" + en + "' maps to a trivial path");
    if (!is_reduced(w)) throw Error(ErrorKind::Structural, "image of edge '" + en + "' is not reduced");
    const EdgePath p{vertex_image(domain_.edge(e).from), w};
    check_path(codomain_, p);
    if (terminal_vertex(codomain_, p) != vertex_image(domain_.edge(e).to))
      throw Error(ErrorKind::Structural, "image of edge '" + en + "' ends at the wrong vertex");
    images_[Letter(e, true).code()] = inverse_word(w);
    images_[Letter(e, false).code()] = std::move(w);
  }
}

GraphMap GraphMap::identity(const MarkedGraph& g) {
  std::vector<int> vertices(static_cast<std::size_t>(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v) vertices[static_cast<std::size_t>(v)] = v;
  std::vector<Word> edges;
  for (int e = 0; e < g.num_edges(); ++e) edges.push_back({Letter(e, false)});
  return GraphMap(g, g, std::move(vertices), std::move(edges), "id");
}

std::size_t GraphMap::lipschitz() const {
  std::size_t m = 0;
  for (const auto& w : images_) m = std::max(m, w.size());
  return m;
}

namespace {

void push_image(const GraphMap& f, Letter l, Word& out) {
  for (Letter x : f.image(l)) {
    if (!out.empty() && out.back() == x.inverse()) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
}

}  // namespace

EdgePath apply(const GraphMap& f, const EdgePath& p) {
  check_path(f.domain(), p);
  EdgePath out{f.vertex_image(p.start), {}};
  out.letters.reserve(p.size() * 2);
  for (Letter l : p.letters) push_image(f, l, out.letters);
  return out;
}

EdgePath iterate(const GraphMap& f, const EdgePath& p, int k) {
  if (k < 0) throw Error(ErrorKind::Precondition, "negative iterate count");
  if (k > 0 && !f.is_self_map()) throw Error(ErrorKind::Precondition, "iterate needs a self map");
  EdgePath cur = p;
  for (int i = 0; i < k; ++i) cur = apply(f, cur);
  return cur;
}

Circuit apply(const GraphMap& f, const Circuit& c) {
  Word w;
  w.reserve(c.size() * 2);
  for (Letter l : c.letters) push_image(f, l, w);
  return cyclically_reduce(Circuit{std::move(w)});
}

Circuit iterate(const GraphMap& f, const Circuit& c, int k) {
  Circuit cur = cyclically_reduce(c);
  for (int i = 0; i < k; ++i) cur = apply(f, cur);
  return cur;
}

GraphMap compose(const GraphMap& outer, const GraphMap& inner) {
  if (!(inner.codomain() == outer.domain())) throw Error(ErrorKind::Precondition, "maps are not composable");
  std::vector<int> vertices;
  for (int v = 0; v < inner.domain().num_vertices(); ++v) vertices.push_back(outer.vertex_image(inner.vertex_image(v)));
  std::vector<Word> edges;
  for (int e = 0; e < inner.domain().num_edges(); ++e) {
    Word w;
    for (Letter l : inner.image(Letter(e, false))) push_image(outer, l, w);
    edges.push_back(std::move(w));
  }
  return GraphMap(inner.domain(), outer.codomain(), std::move(vertices), std::move(edges),
                  outer.name() + "*" + inner.name());
}

GraphMap power(const GraphMap& f, int k) {
  if (k < 0) throw Error(ErrorKind::Precondition, "negative power");
  if (!f.is_self_map()) throw Error(ErrorKind::Precondition, "power needs a self map");
  if (k == 0) return GraphMap::identity(f.domain());
  std::vector<int> vertices;
  for (int v = 0; v < f.domain().num_vertices(); ++v) {
    int w = v;
    for (int i = 0; i < k; ++i) w = f.vertex_image(w);
    vertices.push_back(w);
  }
  std::vector<Word> edges;
  for (int e = 0; e < f.domain().num_edges(); ++e) {
    const EdgePath p{f.domain().edge(e).from, {Letter(e, false)}};
    edges.push_back(iterate(f, p, k).letters);
  }
  std::string name = f.name().empty() ? std::string("f") : f.name();
  if (k != 1) name += "^" + std::to_string(k);
  return GraphMap(f.domain(), f.codomain(), std::move(vertices), std::move(edges), name);
}

namespace {

struct SpanningTree {
  std::vector<Letter> parent_letter;  // letter entering v from its parent; unused at root
  std::vector<bool> in_tree;          // per edge
  std::vector<int> nontree_index;     // per edge, -1 for tree edges
  std::vector<EdgePath> root_path;
  int nontree_count = 0;
};

SpanningTree bfs_tree(const MarkedGraph& g, int root) {
  SpanningTree t;
  const auto nv = static_cast<std::size_t>(g.num_vertices());
  t.parent_letter.assign(nv, Letter());
  t.in_tree.assign(static_cast<std::size_t>(g.num_edges()), false);
  t.root_path.assign(nv, EdgePath{root, {}});
  std::vector<bool> seen(nv, false);
  std::queue<int> q;
  q.push(root);
  seen[static_cast<std::size_t>(root)] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (Letter l : g.directions_at(v)) {
      const int w = g.terminus(l);
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      t.in_tree[static_cast<std::size_t>(l.edge())] = true;
      t.parent_letter[static_cast<std::size_t>(w)] = l;
      t.root_path[static_cast<std::size_t>(w)] = t.root_path[static_cast<std::size_t>(v)];
      t.root_path[static_cast<std::size_t>(w)].letters.push_back(l);
      q.push(w);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorKind::Structural, "graph '" + g.name() + "' is disconnected");
  t.nontree_index.assign(static_cast<std::size_t>(g.num_edges()), -1);
  for (int e = 0; e < g.num_edges(); ++e)
    if (!t.in_tree[static_cast<std::size_t>(e)]) t.nontree_index[static_cast<std::size_t>(e)] = t.nontree_count++;
  return t;
}

}  // namespace

std::vector<EdgePath> fundamental_basis(const MarkedGraph& g, int v0) {
  const SpanningTree t = bfs_tree(g, v0);
  std::vector<EdgePath> basis;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (t.in_tree[static_cast<std::size_t>(e)]) continue;
    EdgePath loop = t.root_path[static_cast<std::size_t>(g.edge(e).from)];
    loop.letters.push_back(Letter(e, false));
    const Word back = inverse_word(t.root_path[static_cast<std::size_t>(g.edge(e).to)].letters);
    loop.letters.insert(loop.letters.end(), back.begin(), back.end());
    basis.push_back(tighten(g, loop));
  }
  return basis;
}

Word contract_tree(const MarkedGraph& g, const EdgePath& p) {
  const SpanningTree t = bfs_tree(g, 0);
  Word w;
  for (Letter l : p.letters) {
    const int idx = t.nontree_index[static_cast<std::size_t>(l.edge())];
    if (idx >= 0) w.emplace_back(idx, l.inverted());
  }
  return free_reduce(w);
}

Pi1Report pi1_check(const GraphMap& f) {
  Pi1Report r;
  r.domain_rank = f.domain().rank();
  r.codomain_rank = f.codomain().rank();
  std::vector<Word> images;
  for (const auto& loop : fundamental_basis(f.domain(), 0)) images.push_back(contract_tree(f.codomain(), apply(f, loop)));
  const StallingsGraph folded = stallings_fold(r.codomain_rank, images);
  r.image_index_vertices = folded.num_vertices;
  r.image_complete = folded.is_complete();
  r.isomorphism = r.image_complete && folded.num_vertices == 1 && r.domain_rank == r.codomain_rank;
  return r;
}

bool TransitionMatrix::is_zero() const {
  for (const auto& row : entries)
    for (auto x : row)
      if (x != 0) return false;
  return true;
}

bool TransitionMatrix::is_irreducible() const {
  const std::size_t n = size();
  if (n <= 1) return true;
  auto reaches_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        const auto x = transpose ? entries[j][i] : entries[i][j];
        if (x > 0 && !seen[j]) {
          seen[j] = true;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

TransitionMatrix transition_matrix(const GraphMap& f, const std::vector<int>& edges) {
  TransitionMatrix m;
  m.edges = edges;
  const std::size_t n = edges.size();
  m.entries.assign(n, std::vector<std::int64_t>(n, 0));
  std::vector<int> index(static_cast<std::size_t>(f.codomain().num_edges()), -1);
  for (std::size_t i = 0; i < n; ++i) index.at(static_cast<std::size_t>(edges[i])) = static_cast<int>(i);
  for (std::size_t j = 0; j < n; ++j)
    for (Letter l : f.image(Letter(edges[j], false))) {
      const int i = index[static_cast<std::size_t>(l.edge())];
      if (i >= 0) ++m.entries[static_cast<std::size_t>(i)][j];
    }
  return m;
}

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.edges != b.edges) throw Error(ErrorKind::Precondition, "matrices index different edges");
  TransitionMatrix m;
  m.edges = a.edges;
  const std::size_t n = a.size();
  m.entries.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) m.entries[i][j] += a.entries[i][k] * b.entries[k][j];
  return m;
}

PfEstimate pf_eigenvalue(const TransitionMatrix& m, double rel_tol) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::Reducible, "empty matrix");
  if (!m.is_irreducible()) throw Error(ErrorKind::Reducible, "matrix is reducible; split it with compute_filtration");
  std::vector<double> x(n, 1.0), y(n);
  PfEstimate est;
  for (int it = 1; it <= 1000000; ++it) {
    double lo = HUGE_VAL, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(m.entries[i][j]) * x[j];
      y[i] = s;
      const double ratio = s / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    est = {(lo + hi) / 2, lo, hi, it};
    if (hi - lo <= rel_tol * hi || hi == 0) break;
    // shift by the identity so periodic matrices still converge
    double top = 0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += x[i];
      top = std::max(top, y[i]);
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / top;
  }
  return est;
}

const char* to_string(StratumClass c) {
  switch (c) {
    case StratumClass::EG: return "EG";
    case StratumClass::NEGFixed: return "NEG_fixed";
    case StratumClass::NEGSuperlinear: return "NEG_superlinear";
    case StratumClass::Zero: return "Zero";
  }
  return "?";
}

std::vector<int> Filtration::eg_strata() const {
  std::vector<int> out;
  for (std::size_t r = 0; r < strata.size(); ++r)
    if (strata[r].cls == StratumClass::EG) out.push_back(static_cast<int>(r));
  return out;
}

Filtration compute_filtration(const GraphMap& f) {
  if (!f.is_self_map()) throw Error(ErrorKind::Precondition, "filtration needs a self map");
  const int n = f.domain().num_edges();
  std::vector<std::vector<int>> deps(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::set<int> crossed;
    for (Letter l : f.image(Letter(j, false))) crossed.insert(l.edge());
    deps[static_cast<std::size_t>(j)].assign(crossed.begin(), crossed.end());
  }

  // Tarjan SCC
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  int counter = 0, ncomp = 0;
  std::function<void(int)> strongconnect = [&](int v) {
    const auto sv = static_cast<std::size_t>(v);
    index[sv] = low[sv] = counter++;
    stack.push_back(v);
    on_stack[sv] = true;
    for (int w : deps[sv]) {
      const auto sw = static_cast<std::size_t>(w);
      if (index[sw] == -1) {
        strongconnect(w);
        low[sv] = std::min(low[sv], low[sw]);
      } else if (on_stack[sw]) {
        low[sv] = std::min(low[sv], index[sw]);
      }
    }
    if (low[sv] == index[sv]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp[static_cast<std::size_t>(w)] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[static_cast<std::size_t>(v)] == -1) strongconnect(v);

  // order components bottom first, ties broken by smallest edge id
  std::vector<std::vector<int>> members(static_cast<std::size_t>(ncomp));
  for (int e = 0; e < n; ++e) members[static_cast<std::size_t>(comp[static_cast<std::size_t>(e)])].push_back(e);
  std::vector<std::set<int>> needs(static_cast<std::size_t>(ncomp));
  for (int j = 0; j < n; ++j)
    for (int i : deps[static_cast<std::size_t>(j)])
      if (comp[static_cast<std::size_t>(i)] != comp[static_cast<std::size_t>(j)])
        needs[static_cast<std::size_t>(comp[static_cast<std::size_t>(j)])].insert(comp[static_cast<std::size_t>(i)]);
  std::vector<bool> placed(static_cast<std::size_t>(ncomp), false);
  Filtration filt;
  filt.stratum_of_edge.assign(static_cast<std::size_t>(n), -1);
  for (int step = 0; step < ncomp; ++step) {
    int best = -1;
    for (int c = 0; c < ncomp; ++c) {
      if (placed[static_cast<std::size_t>(c)]) continue;
      bool ready = true;
      for (int d : needs[static_cast<std::size_t>(c)]) ready = ready && placed[static_cast<std::size_t>(d)];
      if (ready && (best < 0 || members[static_cast<std::size_t>(c)].front() <
                                    members[static_cast<std::size_t>(best)].front()))
        best = c;
    }
    placed[static_cast<std::size_t>(best)] = true;
    Stratum s;
    s.edges = members[static_cast<std::size_t>(best)];
    const TransitionMatrix m = transition_matrix(f, s.edges);
    if (m.is_zero()) {
      s.cls = StratumClass::Zero;
    } else {
      s.pf = pf_eigenvalue(m);
      if (s.pf.lower > 1.0 + kEgThreshold) {
        s.cls = StratumClass::EG;
      } else {
        bool single = true;
        for (int e : s.edges) single = single && f.image(Letter(e, false)).size() == 1;
        s.cls = single ? StratumClass::NEGFixed : StratumClass::NEGSuperlinear;
      }
    }
    for (int e : s.edges) filt.stratum_of_edge[static_cast<std::size_t>(e)] = static_cast<int>(filt.strata.size());
    filt.strata.push_back(std::move(s));
  }
  return filt;
}

bool TurnTable::is_legal(Letter x, Letter y) const {
  if (x == y) return false;
  return legal[index_of(x, y)];
}

std::size_t TurnTable::index_of(Letter x, Letter y) const {
  const auto i = index_.at(x.code() * letters_ + y.code());
  if (i < 0) throw Error(ErrorKind::Precondition, "directions do not form a turn");
  return static_cast<std::size_t>(i);
}

std::size_t TurnTable::illegal_count() const {
  return static_cast<std::size_t>(std::count(legal.begin(), legal.end(), false));
}

TurnTable turn_analysis(const GraphMap& f) {
  if (!f.is_self_map()) throw Error(ErrorKind::Precondition, "turn analysis needs a self map");
  const MarkedGraph& g = f.domain();
  TurnTable t;
  t.letters_ = static_cast<std::size_t>(g.num_letters());
  t.direction_map.resize(t.letters_);
  for (std::uint32_t c = 0; c < t.letters_; ++c) {
    const Letter l = Letter::from_code(c);
    t.direction_map[c] = f.image(l).front();
    if (t.direction_map[c] == l) t.fixed_directions.push_back(l);
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (f.vertex_image(v) == v) t.fixed_vertices.push_back(v);
  t.index_.assign(t.letters_ * t.letters_, -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& dirs = g.directions_at(v);
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j) {
        const auto id = static_cast<std::int64_t>(t.turns.size());
        t.turns.push_back({dirs[i], dirs[j]});
        t.index_[dirs[i].code() * t.letters_ + dirs[j].code()] = id;
        t.index_[dirs[j].code() * t.letters_ + dirs[i].code()] = id;
      }
  }
  // follow each orbit of the induced map on turns until it degenerates or cycles
  t.legal.assign(t.turns.size(), true);
  std::vector<int> seen_at(t.turns.size(), -1);
  for (std::size_t k = 0; k < t.turns.size(); ++k) {
    Letter x = t.turns[k].first, y = t.turns[k].second;
    std::size_t cur = k;
    bool legal = true;
    for (;;) {
      if (seen_at[cur] == static_cast<int>(k)) break;
      seen_at[cur] = static_cast<int>(k);
      x = t.direction_map[x.code()];
      y = t.direction_map[y.code()];
      if (x == y) {
        legal = false;
        break;
      }
      cur = t.index_of(x, y);
    }
    t.legal[k] = legal;
  }
  return t;
}

std::vector<std::size_t> illegal_turn_positions(const TurnTable& turns, const Filtration& filt,
                                                std::span<const Letter> path, int stratum) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Letter x = path[i - 1].inverse();
    const Letter y = path[i];
    if (stratum >= 0 && (filt.height(x) != stratum || filt.height(y) != stratum)) continue;
    if (!turns.is_legal(x, y)) out.push_back(i);
  }
  return out;
}

bool RttReport::passed() const {
  return std::all_of(strata.begin(), strata.end(), [](const auto& s) { return s.passed(); });
}

RttReport verify_rtt(const GraphMap& f, const Filtration& filt, const RttOptions& opts) {
  const MarkedGraph& g = f.domain();
  const TurnTable turns = turn_analysis(f);
  RttReport report;
  for (int r : filt.eg_strata()) {
    RttStratumCheck chk;
    chk.stratum = r;
    const auto& edges = filt.strata[static_cast<std::size_t>(r)].edges;
    std::vector<bool> vertex_in_stratum(static_cast<std::size_t>(g.num_vertices()), false);
    for (int e : edges) {
      vertex_in_stratum[static_cast<std::size_t>(g.edge(e).from)] = true;
      vertex_in_stratum[static_cast<std::size_t>(g.edge(e).to)] = true;
      for (bool inv : {false, true}) {
        const Letter l(e, inv);
        if (filt.height(turns.direction_map[l.code()]) != r) {
          chk.directions_preserved = false;
          chk.failures.push_back("T_f(" + g.letter_name(l) + ") leaves the stratum");
        }
      }
      if (!illegal_turn_positions(turns, filt, f.image(Letter(e, false)), r).empty()) {
        chk.images_r_legal = false;
        chk.failures.push_back("image of " + g.edge(e).name + " has an illegal turn in the stratum");
      }
    }
    for (std::size_t k = 0; k < turns.turns.size(); ++k) {
      const Turn& t = turns.turns[k];
      if (filt.height(t.first) != r || filt.height(t.second) != r || !turns.legal[k]) continue;
      const Letter x = turns.direction_map[t.first.code()], y = turns.direction_map[t.second.code()];
      if (!turns.is_legal(x, y)) {
        chk.legal_turns_map_legal = false;
        chk.failures.push_back("legal turn (" + g.letter_name(t.first) + "," + g.letter_name(t.second) +
                               ") has an illegal image");
      }
    }

    // connecting paths: reduced paths in G_{r-1} with endpoints on H_r
    auto lower = [&](Letter l) { return filt.height(l) < r; };
    auto check_connecting = [&](const EdgePath& p) {
      ++chk.connecting_tested;
      if (apply(f, p).empty()) {
        chk.connecting_paths_ok = false;
        chk.failures.push_back("connecting path " + g.format(p.letters) + " has trivial image");
      }
    };
    bool hit_bound = false;
    std::size_t enumerated = 0;
    EdgePath cur;
    std::function<void(int)> extend = [&](int at) {
      if (enumerated >= opts.enumeration_cap) {
        hit_bound = true;
        return;
      }
      if (static_cast<int>(cur.size()) >= opts.connecting_length) {
        hit_bound = true;
        return;
      }
      for (Letter l : g.directions_at(at)) {
        if (!lower(l)) continue;
        if (!cur.empty() && cur.letters.back() == l.inverse()) continue;
        cur.letters.push_back(l);
        ++enumerated;
        const int w = g.terminus(l);
        if (vertex_in_stratum[static_cast<std::size_t>(w)]) check_connecting(cur);
        extend(w);
        cur.letters.pop_back();
      }
    };
    bool any_lower = false;
    for (int e = 0; e < g.num_edges(); ++e) any_lower = any_lower || filt.stratum_of_edge[static_cast<std::size_t>(e)] < r;
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!vertex_in_stratum[static_cast<std::size_t>(v)]) continue;
      cur = EdgePath{v, {}};
      extend(v);
    }
    if (hit_bound && any_lower) {
      SplitMix64 rng(opts.seed);
      for (std::size_t s = 0; s < opts.random_samples; ++s) {
        SplitMix64 local = rng.split(s);
        std::vector<int> starts;
        for (int v = 0; v < g.num_vertices(); ++v)
          if (vertex_in_stratum[static_cast<std::size_t>(v)]) starts.push_back(v);
        EdgePath p{starts[local.below(starts.size())], {}};
        const auto target = static_cast<std::size_t>(opts.connecting_length) + 1 +
                            local.below(static_cast<std::uint64_t>(opts.connecting_length));
        int at = p.start;
        while (p.size() < target) {
          std::vector<Letter> options;
          for (Letter l : g.directions_at(at))
            if (lower(l) && (p.empty() || p.letters.back() != l.inverse())) options.push_back(l);
          if (options.empty()) break;
          const Letter l = options[local.below(options.size())];
          p.letters.push_back(l);
          at = g.terminus(l);
        }
        if (!p.empty() && vertex_in_stratum[static_cast<std::size_t>(at)]) check_connecting(p);
      }
    }
    chk.connecting_partial = hit_bound;
    report.strata.push_back(std::move(chk));
  }
  return report;
}

std::vector<Circuit> enumerate_circuits(const MarkedGraph& g, int max_len) {
  std::set<Word> found;
  Word cur;
  std::function<void(int, int)> extend = [&](int start, int at) {
    if (!cur.empty() && at == start && cur.front() != cur.back().inverse()) {
      Word w = cur;
      const std::size_t r = least_rotation(w);
      std::rotate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
      found.insert(std::move(w));
    }
    if (static_cast<int>(cur.size()) >= max_len) return;
    for (Letter l : g.directions_at(at)) {
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      cur.push_back(l);
      extend(start, g.terminus(l));
      cur.pop_back();
    }
  };
  for (int v = 0; v < g.num_vertices(); ++v) extend(v, v);
  std::vector<Circuit> out;
  for (const auto& w : found) out.push_back({w});
  std::stable_sort(out.begin(), out.end(), [](const Circuit& a, const Circuit& b) { return a.size() < b.size(); });
  return out;
}

std::vector<PeriodicClass> periodic_class_scan(const GraphMap& f, int max_len, int max_iter, std::size_t length_cap) {
  if (!f.is_self_map()) throw Error(ErrorKind::Precondition, "scan needs a self map");
  std::vector<PeriodicClass> out;
  for (const Circuit& c : enumerate_circuits(f.domain(), max_len)) {
    Circuit cur = c;
    for (int k = 1; k <= max_iter; ++k) {
      cur = apply(f, cur);
      if (cur == c) {
        out.push_back({c, k});
        break;
      }
      if (cur.size() > length_cap) break;
    }
  }
  return out;
}

}  // namespace fga
