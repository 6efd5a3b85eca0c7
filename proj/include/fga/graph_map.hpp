#pragma once

// Topological representatives: tightened iteration, transition matrices,
// invariant filtrations, Perron-Frobenius eigenvalues and turns.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fga/words.hpp"

namespace fga {

class GraphMap {
 public:
  GraphMap() = default;
  /// Edge images are given for positive orientations. Throws Structural on
  /// images that are empty, unreduced, or incompatible with vertex images.
  GraphMap(MarkedGraph domain, MarkedGraph codomain, std::vector<int> vertex_image, std::vector<Word> edge_image,
           std::string name = {});

  static GraphMap identity(const MarkedGraph& g);

  const std::string& name() const { return name_; }
  const MarkedGraph& domain() const { return domain_; }
  const MarkedGraph& codomain() const { return codomain_; }
  bool is_self_map() const { return domain_ == codomain_; }
  int vertex_image(int v) const { return vertex_image_.at(static_cast<std::size_t>(v)); }
  /// Image of an oriented edge; the inverse letter maps to the reversed
  /// inverse word.
  const Word& image(Letter l) const { return images_[l.code()]; }
  /// Largest edge image length.
  std::size_t lipschitz() const;

 private:
  std::string name_;
  MarkedGraph domain_;
  MarkedGraph codomain_;
  std::vector<int> vertex_image_;
  std::vector<Word> images_;  // indexed by letter code
};

EdgePath apply(const GraphMap& f, const EdgePath& p);
EdgePath iterate(const GraphMap& f, const EdgePath& p, int k);
/// Image of a circuit, cyclically reduced and canonically rotated.
Circuit apply(const GraphMap& f, const Circuit& c);
Circuit iterate(const GraphMap& f, const Circuit& c, int k);
GraphMap compose(const GraphMap& outer, const GraphMap& inner);
GraphMap power(const GraphMap& f, int k);

struct Pi1Report {
  bool isomorphism = false;
  int domain_rank = 0;
  int codomain_rank = 0;
  int image_index_vertices = 0;  // vertices of the folded image subgroup graph
  bool image_complete = false;
};

/// Folds the image of a basis of pi_1; isomorphism iff the image subgroup is
/// everything and ranks agree.
Pi1Report pi1_check(const GraphMap& f);
/// Basis of pi_1(g, v0) as reduced loops, one per edge off a BFS tree.
std::vector<EdgePath> fundamental_basis(const MarkedGraph& g, int v0 = 0);
/// Rewrites a path as a word in the non-tree edges of a BFS tree of g.
Word contract_tree(const MarkedGraph& g, const EdgePath& p);

struct TransitionMatrix {
  std::vector<int> edges;
  std::vector<std::vector<std::int64_t>> entries;  // entries[i][j]: crossings of edges[i] by f(edges[j])

  std::size_t size() const { return edges.size(); }
  bool is_zero() const;
  bool is_irreducible() const;
};

TransitionMatrix transition_matrix(const GraphMap& f, const std::vector<int>& edges);
TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

struct PfEstimate {
  double value = 0;
  double lower = 0;
  double upper = 0;
  int iterations = 0;
};

/// Dominant eigenvalue of an irreducible nonnegative matrix by shifted power
/// iteration, bracketed by Collatz-Wielandt bounds. Throws Reducible.
PfEstimate pf_eigenvalue(const TransitionMatrix& m, double rel_tol = 1e-10);

enum class StratumClass { EG, NEGFixed, NEGSuperlinear, Zero };
const char* to_string(StratumClass c);

inline constexpr double kEgThreshold = 1e-9;

struct Stratum {
  std::vector<int> edges;
  StratumClass cls = StratumClass::Zero;
  PfEstimate pf;
};

struct Filtration {
  std::vector<Stratum> strata;  // bottom first
  std::vector<int> stratum_of_edge;

  int height(Letter l) const { return stratum_of_edge.at(static_cast<std::size_t>(l.edge())); }
  std::vector<int> eg_strata() const;
  bool in_lower(int edge, int r) const { return stratum_of_edge.at(static_cast<std::size_t>(edge)) < r; }
};

Filtration compute_filtration(const GraphMap& f);

struct Turn {
  Letter first;
  Letter second;  // first < second
  friend bool operator==(const Turn&, const Turn&) = default;
};

struct TurnTable {
  std::vector<Letter> direction_map;  // T_f indexed by letter code
  std::vector<Turn> turns;
  std::vector<bool> legal;
  std::vector<Letter> fixed_directions;
  std::vector<int> fixed_vertices;

  /// Turn (x, y) with common initial vertex; degenerate turns are illegal.
  bool is_legal(Letter x, Letter y) const;
  std::size_t index_of(Letter x, Letter y) const;
  std::size_t illegal_count() const;

 private:
  friend TurnTable turn_analysis(const GraphMap& f);
  std::vector<std::int64_t> index_;  // code(x) * letters + code(y) -> turn index or -1
  std::size_t letters_ = 0;
};

TurnTable turn_analysis(const GraphMap& f);

/// Illegal turns along a path: positions i where (letters[i-1]^-1, letters[i])
/// is illegal and both directions lie in `stratum` (any stratum when < 0).
std::vector<std::size_t> illegal_turn_positions(const TurnTable& turns, const Filtration& filt,
                                                std::span<const Letter> path, int stratum = -1);

struct RttStratumCheck {
  int stratum = 0;
  bool directions_preserved = true;   // T_f(E) in H_r for E in H_r
  bool images_r_legal = true;         // f(E) is r-legal for E in H_r
  bool legal_turns_map_legal = true;  // T_f of r-legal turns is legal
  bool connecting_paths_ok = true;
  bool connecting_partial = true;
  std::size_t connecting_tested = 0;
  std::vector<std::string> failures;

  bool passed() const {
    return directions_preserved && images_r_legal && legal_turns_map_legal && connecting_paths_ok;
  }
};

struct RttReport {
  std::vector<RttStratumCheck> strata;
  bool passed() const;
};

struct RttOptions {
  int connecting_length = 12;
  std::size_t enumeration_cap = 200000;
  std::size_t random_samples = 2000;
  std::uint64_t seed = 1;
};

RttReport verify_rtt(const GraphMap& f, const Filtration& filt, const RttOptions& opts = {});

struct PeriodicClass {
  Circuit circuit;
  int period = 0;
};

/// Circuits of length <= max_len whose conjugacy class returns to itself
/// within max_iter iterates. Classes are listed by length, then letter order.
std::vector<PeriodicClass> periodic_class_scan(const GraphMap& f, int max_len, int max_iter,
                                               std::size_t length_cap = 1u << 22);

/// All cyclically reduced circuits up to length max_len, one canonical
/// representative per class.
std::vector<Circuit> enumerate_circuits(const MarkedGraph& g, int max_len);

}  // namespace fga
