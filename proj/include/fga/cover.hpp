#pragma once

// Finite covers of roses: Stallings folding, path lifting and cosets.

#include <vector>

#include "fga/words.hpp"

namespace fga {

/// Folded (Stallings) graph of a subgroup of the free group on `num_generators`
/// letters. Vertex 0 is the basepoint; vertices are numbered in depth-first
/// order following the letter order.
struct StallingsGraph {
  struct Edge {
    int from;
    int generator;  // positive base letter
    int to;
  };
  int num_generators = 0;
  int num_vertices = 1;
  std::vector<Edge> edges;

  int rank() const { return static_cast<int>(edges.size()) - num_vertices + 1; }
  /// Every vertex has an outgoing edge for each of the 2n letters.
  bool is_complete() const;
};

StallingsGraph stallings_fold(int num_generators, const std::vector<Word>& generators);

/// A covering map from `total` onto the rose `base`, given on the nose by
/// an edge labeling.
class CoverMap {
 public:
  CoverMap() = default;
  /// Validates the covering condition; throws NotACovering naming the
  /// offending vertex.
  CoverMap(MarkedGraph total, MarkedGraph base, std::vector<Letter> labels, int basepoint);

  const MarkedGraph& total() const { return total_; }
  const MarkedGraph& base() const { return base_; }
  int basepoint() const { return basepoint_; }
  int degree() const { return total_.num_vertices(); }
  Letter label(Letter total_letter) const;
  /// The unique total letter at vertex v lying over `base_letter`.
  Letter lift_letter(int v, Letter base_letter) const {
    return lifts_[static_cast<std::size_t>(v) * static_cast<std::size_t>(base_.num_letters()) + base_letter.code()];
  }

  /// Copy with the base letters permuted/inverted by `relabel` (indexed by
  /// base letter code).
  CoverMap relabeled(const std::vector<Letter>& relabel) const;

 private:
  MarkedGraph total_;
  MarkedGraph base_;
  std::vector<Letter> labels_;
  std::vector<Letter> lifts_;
  int basepoint_ = 0;
};

CoverMap build_cover(const MarkedGraph& base_rose, const std::vector<EdgePath>& subgroup_generators);

EdgePath lift_path(const CoverMap& cover, const EdgePath& base_path, int start);
EdgePath project_path(const CoverMap& cover, const EdgePath& total_path);

/// One reduced base word per total vertex, read along a depth-first spanning
/// tree rooted at the basepoint; entry v reaches vertex v.
std::vector<EdgePath> coset_representatives(const CoverMap& cover);
/// Total-graph paths from the basepoint along the same spanning tree.
std::vector<EdgePath> tree_paths(const CoverMap& cover);

}  // namespace fga
