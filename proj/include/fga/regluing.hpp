#pragma once

// Homogeneous graphs of roses, regluings, special hallways and flaring.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fga/cover.hpp"
#include "fga/graph_map.hpp"
#include "fga/laminations.hpp"
#include "fga/rng.hpp"

namespace fga {

struct BaseVertex {
  std::string name;
  MarkedGraph rose;
};

struct BaseEdge {
  std::string name;
  int u = 0;
  int v = 0;
  MarkedGraph space;  // shared edge graph
  CoverMap attach_u;  // space -> rose of u
  CoverMap attach_v;  // space -> rose of v
};

struct GraphOfRoses {
  std::string name;
  std::vector<BaseVertex> vertices;
  std::vector<BaseEdge> edges;

  int vertex_index(const std::string& name) const;
};

struct EdgeAutomorphism {
  GraphMap phi;
  GraphMap phi_inv;
  int exponent = 1;
};

struct RegluingSpec {
  std::vector<EdgeAutomorphism> edges;  // parallel to GraphOfRoses::edges
  int power = 1;                        // global k applied to every automorphism
};

struct EdgeValidation {
  std::string edge;
  int degree_u = 0;
  int degree_v = 0;
  int space_rank = 0;
  bool exact_inverse = false;  // phi_inv(phi(E)) = E on every edge
};

struct SystemReport {
  std::vector<EdgeValidation> edges;
};

/// Throws NotACovering, InverseMismatch, Structural or Precondition with a
/// diagnostic naming the edge and the failing vertex or basis loop.
SystemReport validate_system(const GraphOfRoses& g, const RegluingSpec& spec);

/// Basis loop at vertex 0 on which psi fails to act as a single inner
/// automorphism, or nullopt when psi is inner.
std::optional<EdgePath> inner_witness(const GraphMap& psi);

struct SubdividedBase {
  struct Vertex {
    bool original = true;
    int base_vertex = -1;  // original vertices
    int edge = -1;         // subdivision vertices: parent edge and chain position 1..n-1
    int position = 0;
  };
  struct Edge {
    int from = 0;
    int to = 0;
    int parent = 0;
    int index = 0;  // 0..n_e-1 from the u end
  };
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<int> chain_length;  // n_e per base edge
  std::vector<int> chain_start;   // first subdivision vertex of each chain

  int num_original() const;
  /// Subdivided vertex at chain position k of edge e (0 and n_e are the ends).
  int chain_vertex(const GraphOfRoses& g, int e, int k) const;
};

SubdividedBase subdivide(const GraphOfRoses& g, const RegluingSpec& spec);

/// A tree edge at an original vertex: an edge end together with a vertex
/// of that end's cover (the coset).
struct Departure {
  int edge = 0;
  bool v_end = false;
  int fiber = 0;
  friend bool operator==(const Departure&, const Departure&) = default;
};

struct Vertical {
  int base = 0;    // subdivided vertex
  int space = -1;  // edge whose space holds the word, -1 for a vertex rose
  int anchor = 0;  // start vertex of the word in its space
  Word word;
  std::size_t length() const { return word.size(); }
};

struct HallwayRequest {
  int center = 0;  // subdivided vertex
  int m = 1;
  Word midpoint;
  int anchor = 0;
  std::array<std::vector<Departure>, 2> departures;  // used in order at original vertices
  std::optional<std::uint64_t> seed;                 // draws missing departures when set
};

struct SpecialHallway {
  int m = 0;
  int center = 0;
  std::vector<Vertical> verticals;  // position i stored at i + m
  std::array<std::vector<Departure>, 2> departures;
  int crossings = 0;
  bool lengths_preserved = true;  // across every original vertex
  bool lipschitz_ok = true;       // two-sided sandwich on every chain step

  std::size_t length(int i) const { return verticals.at(static_cast<std::size_t>(i + m)).length(); }
  std::vector<std::size_t> profile() const;
  std::size_t girth() const;
};

/// Powers, chains and departure tables prepared for hallway propagation.
class HallwayEngine {
 public:
  HallwayEngine(GraphOfRoses g, RegluingSpec spec);

  const GraphOfRoses& graph() const { return g_; }
  const RegluingSpec& spec() const { return spec_; }
  const SubdividedBase& base() const { return sub_; }
  const GraphMap& forward(int e) const { return fwd_.at(static_cast<std::size_t>(e)); }
  const GraphMap& backward(int e) const { return bwd_.at(static_cast<std::size_t>(e)); }
  const CoverMap& attachment(int e, bool v_end) const;
  /// Tree edges at an original vertex, in (edge, end, fiber) order.
  const std::vector<Departure>& departures(int base_vertex) const {
    return departures_.at(static_cast<std::size_t>(base_vertex));
  }

  SpecialHallway propagate(const HallwayRequest& req) const;

 private:
  GraphOfRoses g_;
  RegluingSpec spec_;
  SubdividedBase sub_;
  std::vector<GraphMap> fwd_;
  std::vector<GraphMap> bwd_;
  std::vector<std::size_t> lip_fwd_;
  std::vector<std::size_t> lip_bwd_;
  std::vector<bool> exact_inverse_;
  std::vector<std::vector<Departure>> departures_;
};

SpecialHallway propagate_hallway(const HallwayEngine& engine, const HallwayRequest& req);

enum class FlareVerdict { Pass, Fail, BelowGirth };
const char* to_string(FlareVerdict v);

/// Below girth when some vertical is shorter than H; otherwise pass iff
/// lambda l(0) <= max(l(-m), l(m)).
FlareVerdict flare_check(std::span<const std::size_t> profile, double lambda, std::size_t girth_threshold);
FlareVerdict flare_check(const SpecialHallway& h, double lambda, std::size_t girth_threshold);

/// Inclusive window of positions in a length profile.
struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// lambda times the central length is at most the larger end length; for
/// an odd window the larger of the two middle values is central.
bool window_flares(std::span<const double> profile, Window w, double lambda);

struct ConcatenationCheck {
  bool hypotheses = false;  // windows overlap properly by at least N and both flare
  bool conclusion = false;  // the union window flares
};

ConcatenationCheck concatenation_check(std::span<const double> profile, Window first, Window second,
                                       std::size_t overlap_min, double lambda = 2.0);

struct StretchResult {
  std::vector<std::size_t> lengths;  // per edge end: |phi^m(tau)|, |phi^-m(tau)|
  std::size_t threshold = 0;         // 2 |tau|
  std::size_t grown = 0;
  bool pass = false;
};

/// At least 2k - 1 of the 2k lengths exceed 2 |tau|, k = lengths.size() / 2.
StretchResult all_but_one_verdict(std::vector<std::size_t> lengths, std::size_t tau_length);

/// Lifts tau at the basepoint of every cover attached at the vertex and
/// iterates the edge automorphism m times in both directions.
StretchResult all_but_one(const HallwayEngine& engine, int vertex, const Word& tau, int m);
/// The two-end case; throws Precondition unless the vertex has two edge ends.
StretchResult three_of_four(const HallwayEngine& engine, int vertex, const Word& tau, int m);

struct StretchConfig {
  std::size_t samples = 100;  // per (length, m) cell
  std::vector<std::size_t> lengths{8, 16, 32};
  int m_max = 8;
  std::uint64_t seed = 1;
  double threshold = 1.0;
  std::size_t max_failures = 50;
};

struct StretchRow {
  std::size_t length = 0;
  int m = 0;
  std::size_t samples = 0;
  std::size_t passed = 0;
  double fraction() const { return samples == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(samples); }
};

struct StretchFailure {
  std::size_t length = 0;
  int m = 0;
  std::size_t sample = 0;
  Word tau;
  std::vector<std::size_t> lengths;
};

struct StretchSurvey {
  int vertex = 0;
  std::vector<StretchRow> rows;
  std::optional<std::size_t> l_estimate;  // smallest L with every row (>= L, >= M) at threshold
  std::optional<int> m_estimate;
  std::vector<StretchFailure> failures;
  std::size_t failure_count = 0;
};

StretchSurvey stretch_survey(const HallwayEngine& engine, int vertex, const StretchConfig& cfg);

struct FlareConfig {
  std::vector<int> candidates{4, 8, 16, 24};
  std::size_t samples = 500;  // hallways per (n, m)
  int m_max = 12;
  double lambda = 2.0;
  std::size_t girth = 8;
  std::uint64_t seed = 1;
  std::size_t word_min = 16;
  std::size_t word_max = 40;
  int short_m = 2;  // half-length of the short hallways behind the C0 estimate
  double threshold = 1.0;
};

struct FlareRow {
  int m = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t below_girth = 0;
  double fraction() const {
    const std::size_t n = passed + failed;
    return n == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(n);
  }
};

struct FlareWitness {
  int m = 0;
  std::size_t sample = 0;
  int center = 0;
  std::vector<std::size_t> profile;
  std::array<std::vector<Departure>, 2> departures;
};

struct FlareReport {
  int n = 0;
  std::vector<FlareRow> rows;  // m = 1..m_max
  std::vector<FlareWitness> witnesses;
  double pass_fraction = 0;  // at m_max
  std::optional<int> n0;     // smallest m from which every row meets the threshold
  double c0 = 1.0;           // largest end-length ratio over short hallways
  bool meets = false;
};

/// One hallway sample of a (n, m) cell; the draw depends only on the seed
/// and the indices.
SpecialHallway sample_hallway(const HallwayEngine& engine, int m, std::uint64_t seed, std::size_t sample,
                              std::size_t word_min, std::size_t word_max, bool near_original = false);

FlareReport flare_report(const HallwayEngine& engine, int n, const FlareConfig& cfg);

struct ExponentSearch {
  std::vector<FlareReport> reports;
  std::optional<int> smallest;  // smallest candidate n that meets the threshold
};

/// Sets every exponent to each candidate n in turn and samples hallways.
ExponentSearch exponent_search(const GraphOfRoses& g, const RegluingSpec& spec, const FlareConfig& cfg);

/// Edge-end data at a vertex for the independence tests: the u end carries
/// (attach_u, phi, phi_inv), the v end (attach_v, phi_inv, phi), both at the
/// global power.
std::vector<EndData> vertex_ends(const GraphOfRoses& g, const RegluingSpec& spec, int vertex);

/// Word in `space` lying over `base_word` from fiber vertex `fiber`.
EdgePath lift_word(const CoverMap& cover, const Word& base_word, int fiber);

/// Uniform reduced path of the given length from `start`.
Word random_reduced_path(const MarkedGraph& g, int start, std::size_t length, SplitMix64& rng);

}  // namespace fga
