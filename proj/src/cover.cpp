#include "fga/cover.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace fga {

bool StallingsGraph::is_complete() const {
  std::vector<int> degree(static_cast<std::size_t>(num_vertices), 0);
  for (const auto& e : edges) {
    ++degree[static_cast<std::size_t>(e.from)];
    ++degree[static_cast<std::size_t>(e.to)];
  }
  for (int d : degree)
    if (d != 2 * num_generators) return false;
  return true;
}

namespace {

// Union-find folding over a per-vertex transition table.
class Folder {
 public:
  explicit Folder(int num_generators) : letters_(2 * num_generators) { new_vertex(); }

  int new_vertex() {
    parent_.push_back(static_cast<int>(parent_.size()));
    out_.resize(out_.size() + static_cast<std::size_t>(letters_), -1);
    return static_cast<int>(parent_.size()) - 1;
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }

  int& slot(int v, std::uint32_t code) {
    return out_[static_cast<std::size_t>(v) * static_cast<std::size_t>(letters_) + code];
  }

  void add_edge(int u, Letter l, int v) {
    u = find(u);
    v = find(v);
    if (int& t = slot(u, l.code()); t == -1) {
      t = v;
    } else {
      pending_.emplace(t, v);
    }
    if (int& s = slot(v, l.inverse().code()); s == -1) {
      s = u;
    } else {
      pending_.emplace(s, u);
    }
    drain();
  }

  void drain() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.front();
      pending_.pop();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      parent_[static_cast<std::size_t>(b)] = a;
      for (std::uint32_t x = 0; x < static_cast<std::uint32_t>(letters_); ++x) {
        int& from_b = slot(b, x);
        if (from_b == -1) continue;
        int& from_a = slot(a, x);
        if (from_a == -1) {
          from_a = from_b;
        } else {
          pending_.emplace(from_a, from_b);
        }
        from_b = -1;
      }
    }
  }

  StallingsGraph finish(int num_generators) {
    const int n = static_cast<int>(parent_.size());
    // prune valence-one vertices away from the basepoint
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
      if (find(v) != v) continue;
      for (std::uint32_t x = 0; x < static_cast<std::uint32_t>(letters_); ++x)
        if (slot(v, x) != -1) ++degree[static_cast<std::size_t>(v)];
    }
    const int root = find(0);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
      if (find(v) == v && v != root && degree[static_cast<std::size_t>(v)] == 1) stack.push_back(v);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (degree[static_cast<std::size_t>(v)] != 1) continue;
      for (std::uint32_t x = 0; x < static_cast<std::uint32_t>(letters_); ++x) {
        int& t = slot(v, x);
        if (t == -1) continue;
        const int w = find(t);
        t = -1;
        slot(w, x ^ 1u) = -1;
        degree[static_cast<std::size_t>(v)] = 0;
        if (--degree[static_cast<std::size_t>(w)] == 1 && w != root) stack.push_back(w);
      }
    }

    // depth-first renumbering from the basepoint
    std::vector<int> number(static_cast<std::size_t>(n), -1);
    int next = 0;
    std::vector<std::pair<int, std::uint32_t>> dfs;
    number[static_cast<std::size_t>(root)] = next++;
    dfs.emplace_back(root, 0u);
    while (!dfs.empty()) {
      auto& [v, x] = dfs.back();
      if (x == static_cast<std::uint32_t>(letters_)) {
        dfs.pop_back();
        continue;
      }
      const int t = slot(v, x++);
      if (t == -1) continue;
      const int w = find(t);
      if (number[static_cast<std::size_t>(w)] == -1) {
        number[static_cast<std::size_t>(w)] = next++;
        dfs.emplace_back(w, 0u);
      }
    }

    StallingsGraph g;
    g.num_generators = num_generators;
    g.num_vertices = next;
    for (int gen = 0; gen < num_generators; ++gen) {
      std::vector<StallingsGraph::Edge> by_source;
      for (int v = 0; v < n; ++v) {
        if (find(v) != v || number[static_cast<std::size_t>(v)] == -1) continue;
        const int t = slot(v, Letter(gen, false).code());
        if (t == -1) continue;
        by_source.push_back({number[static_cast<std::size_t>(v)], gen, number[static_cast<std::size_t>(find(t))]});
      }
      std::sort(by_source.begin(), by_source.end(), [](const auto& a, const auto& b) { return a.from < b.from; });
      g.edges.insert(g.edges.end(), by_source.begin(), by_source.end());
    }
    return g;
  }

 private:
  int letters_;
  std::vector<int> parent_;
  std::vector<int> out_;
  std::queue<std::pair<int, int>> pending_;
};

}  // namespace

StallingsGraph stallings_fold(int num_generators, const std::vector<Word>& generators) {
  Folder folder(num_generators);
  for (const Word& raw : generators) {
    const Word w = free_reduce(raw);
    int at = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].edge() >= num_generators) throw Error(ErrorKind::Structural, "generator letter outside the rose");
      const int next = (i + 1 == w.size()) ? 0 : folder.new_vertex();
      folder.add_edge(at, w[i], next);
      at = next;
    }
  }
  return folder.finish(num_generators);
}

CoverMap::CoverMap(MarkedGraph total, MarkedGraph base, std::vector<Letter> labels, int basepoint)
    : total_(std::move(total)), base_(std::move(base)), labels_(std::move(labels)), basepoint_(basepoint) {
  if (!base_.is_rose()) throw Error(ErrorKind::NotACovering, "base graph '" + base_.name() + "' is not a rose");
  if (static_cast<int>(labels_.size()) != total_.num_edges())
    throw Error(ErrorKind::NotACovering, "label count differs from edge count");
  if (basepoint_ < 0 || basepoint_ >= total_.num_vertices())
    throw Error(ErrorKind::NotACovering, "basepoint is not a vertex");
  const auto n = static_cast<std::size_t>(base_.num_letters());
  lifts_.assign(static_cast<std::size_t>(total_.num_vertices()) * n, Letter::from_code(~0u));
  for (int e = 0; e < total_.num_edges(); ++e) {
    if (labels_[static_cast<std::size_t>(e)].edge() >= base_.num_edges())
      throw Error(ErrorKind::NotACovering, "label outside base on edge '" + total_.edge(e).name + "'");
    for (bool inv : {false, true}) {
      const Letter l(e, inv);
      const int v = total_.origin(l);
      Letter& s = lifts_[static_cast<std::size_t>(v) * n + label(l).code()];
      if (s.code() != ~0u)
        throw Error(ErrorKind::NotACovering, "vertex '" + total_.vertex_name(v) + "' has two lifts of letter " +
                                                 base_.letter_name(label(l)));
      s = l;
    }
  }
  for (int v = 0; v < total_.num_vertices(); ++v)
    for (std::size_t x = 0; x < n; ++x)
      if (lifts_[static_cast<std::size_t>(v) * n + x].code() == ~0u)
        throw Error(ErrorKind::NotACovering, "vertex '" + total_.vertex_name(v) + "' has no lift of letter " +
                                                 base_.letter_name(Letter::from_code(static_cast<std::uint32_t>(x))));
  if (!total_.is_connected()) throw Error(ErrorKind::NotACovering, "total graph is disconnected");
}

Letter CoverMap::label(Letter l) const {
  const Letter lab = labels_.at(static_cast<std::size_t>(l.edge()));
  return l.inverted() ? lab.inverse() : lab;
}

CoverMap CoverMap::relabeled(const std::vector<Letter>& relabel) const {
  std::vector<Letter> labels;
  labels.reserve(labels_.size());
  for (Letter l : labels_) labels.push_back(relabel.at(l.code()));
  return CoverMap(total_, base_, std::move(labels), basepoint_);
}

CoverMap build_cover(const MarkedGraph& base_rose, const std::vector<EdgePath>& subgroup_generators) {
  if (!base_rose.is_rose()) throw Error(ErrorKind::Precondition, "build_cover needs a rose base");
  std::vector<Word> words;
  for (const auto& p : subgroup_generators) {
    check_path(base_rose, p);
    words.push_back(p.letters);
  }
  const StallingsGraph folded = stallings_fold(base_rose.num_edges(), words);
  if (!folded.is_complete())
    throw Error(ErrorKind::InfiniteIndex, "subgroup has infinite index (folded graph has " +
                                              std::to_string(folded.num_vertices) + " vertices and is incomplete)");
  MarkedGraph total("cover_of_" + base_rose.name());
  for (int v = 0; v < folded.num_vertices; ++v) total.add_vertex(std::to_string(v));
  std::vector<Letter> labels;
  for (const auto& e : folded.edges) {
    total.add_edge(base_rose.edge(e.generator).name + std::to_string(e.from), e.from, e.to);
    labels.emplace_back(e.generator, false);
  }
  return CoverMap(std::move(total), base_rose, std::move(labels), 0);
}

EdgePath lift_path(const CoverMap& cover, const EdgePath& base_path, int start) {
  check_path(cover.base(), base_path);
  if (start < 0 || start >= cover.degree()) throw Error(ErrorKind::Precondition, "lift start is not a vertex");
  EdgePath out{start, {}};
  out.letters.reserve(base_path.size());
  int at = start;
  for (Letter l : base_path.letters) {
    const Letter t = cover.lift_letter(at, l);
    out.letters.push_back(t);
    at = cover.total().terminus(t);
  }
  return out;
}

EdgePath project_path(const CoverMap& cover, const EdgePath& total_path) {
  check_path(cover.total(), total_path);
  EdgePath out{0, {}};
  out.letters.reserve(total_path.size());
  for (Letter l : total_path.letters) out.letters.push_back(cover.label(l));
  return out;
}

std::vector<EdgePath> tree_paths(const CoverMap& cover) {
  const MarkedGraph& g = cover.total();
  const int letters = cover.base().num_letters();
  std::vector<EdgePath> paths(static_cast<std::size_t>(g.num_vertices()));
  std::vector<bool> seen(paths.size(), false);
  seen[static_cast<std::size_t>(cover.basepoint())] = true;
  paths[static_cast<std::size_t>(cover.basepoint())] = {cover.basepoint(), {}};
  std::vector<std::pair<int, int>> dfs{{cover.basepoint(), 0}};
  while (!dfs.empty()) {
    auto& [v, x] = dfs.back();
    if (x == letters) {
      dfs.pop_back();
      continue;
    }
    const Letter t = cover.lift_letter(v, Letter::from_code(static_cast<std::uint32_t>(x++)));
    const int w = g.terminus(t);
    if (seen[static_cast<std::size_t>(w)]) continue;
    seen[static_cast<std::size_t>(w)] = true;
    EdgePath p = paths[static_cast<std::size_t>(v)];
    p.letters.push_back(t);
    paths[static_cast<std::size_t>(w)] = std::move(p);
    dfs.emplace_back(w, 0);
  }
  return paths;
}

std::vector<EdgePath> coset_representatives(const CoverMap& cover) {
  std::vector<EdgePath> reps;
  for (const auto& p : tree_paths(cover)) reps.push_back(project_path(cover, p));
  return reps;
}

}  // namespace fga
