#pragma once

// Marked graphs, oriented edges and reduced edge paths.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fga/error.hpp"

namespace fga {

/// An oriented edge: edge id plus orientation bit. The code order
/// a < A < b < B < ... is the fixed letter order used for canonical forms.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int edge, bool inverted)
      : code_(static_cast<std::uint32_t>(edge) * 2u + (inverted ? 1u : 0u)) {}

  static constexpr Letter from_code(std::uint32_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  constexpr int edge() const { return static_cast<int>(code_ >> 1); }
  constexpr bool inverted() const { return (code_ & 1u) != 0; }
  constexpr Letter inverse() const { return from_code(code_ ^ 1u); }
  constexpr std::uint32_t code() const { return code_; }

  constexpr auto operator<=>(const Letter&) const = default;

 private:
  std::uint32_t code_ = 0;
};

using Word = std::vector<Letter>;

class MarkedGraph {
 public:
  struct Edge {
    std::string name;
    int from = 0;
    int to = 0;
  };

  MarkedGraph() = default;
  explicit MarkedGraph(std::string name) : name_(std::move(name)) {}

  /// Rose with petals named by `petals`, all at a single vertex "0".
  static MarkedGraph rose(const std::vector<std::string>& petals, std::string name = "rose");

  int add_vertex(const std::string& name);
  int add_edge(const std::string& name, int from, int to);

  const std::string& name() const { return name_; }
  int num_vertices() const { return static_cast<int>(vertex_names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_letters() const { return 2 * num_edges(); }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::string& vertex_name(int v) const { return vertex_names_.at(static_cast<std::size_t>(v)); }

  int origin(Letter l) const { return l.inverted() ? edge(l.edge()).to : edge(l.edge()).from; }
  int terminus(Letter l) const { return l.inverted() ? edge(l.edge()).from : edge(l.edge()).to; }

  /// Oriented edges with initial vertex v, in letter order.
  const std::vector<Letter>& directions_at(int v) const { return out_.at(static_cast<std::size_t>(v)); }
  int valence(int v) const { return static_cast<int>(directions_at(v).size()); }

  bool is_rose() const { return num_vertices() == 1; }
  bool is_connected() const;
  /// Rank of the fundamental group; requires a connected graph.
  int rank() const { return num_edges() - num_vertices() + 1; }
  /// Throws Structural if some vertex has valence one.
  void check_core() const;

  int vertex_index(const std::string& name) const;
  int edge_index(const std::string& name) const;
  bool has_edge(const std::string& name) const { return edge_lookup_.count(name) != 0; }

  /// Accepts `x`, `X` (uppercase inverse of lowercase x) and `x'`.
  Letter parse_letter(const std::string& token) const;
  std::string letter_name(Letter l) const;
  std::string format(std::span<const Letter> word) const;
  Word parse_word(const std::string& text) const;

  friend bool operator==(const MarkedGraph& a, const MarkedGraph& b);

 private:
  std::string name_;
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Letter>> out_;
  std::map<std::string, int> vertex_lookup_;
  std::map<std::string, int> edge_lookup_;
};

struct EdgePath {
  int start = 0;
  Word letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

/// Cyclic word; closedness is checked against a graph where one is given.
struct Circuit {
  Word letters;

  std::size_t size() const { return letters.size(); }
  friend bool operator==(const Circuit&, const Circuit&) = default;
};

bool is_reduced(std::span<const Letter> word);
bool is_cyclically_reduced(std::span<const Letter> word);
Word free_reduce(std::span<const Letter> word);
Word inverse_word(std::span<const Letter> word);

/// Throws Structural when consecutive letters are not endpoint compatible.
void check_path(const MarkedGraph& g, const EdgePath& p);
int terminal_vertex(const MarkedGraph& g, const EdgePath& p);

EdgePath tighten(const MarkedGraph& g, const EdgePath& p);
EdgePath concat_tighten(const MarkedGraph& g, const EdgePath& p, const EdgePath& q);
EdgePath reverse_path(const MarkedGraph& g, const EdgePath& p);

/// Index of the lexicographically least rotation.
std::size_t least_rotation(std::span<const Letter> word);

/// Cyclic reduction followed by the canonical (least) rotation.
Circuit cyclically_reduce(const Circuit& c);
/// As above, but first checks that c is a closed loop in g.
Circuit cyclically_reduce(const MarkedGraph& g, const Circuit& c);

}  // namespace fga
