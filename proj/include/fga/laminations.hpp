#pragma once

// Leaf segments, singular rays and independence of fixed-point sets.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fga/cover.hpp"
#include "fga/graph_map.hpp"

namespace fga {

enum class Role { Attracting, Repelling };
const char* to_string(Role r);

struct LeafSegment {
  int stratum = 0;
  Letter seed;
  int depth = 0;
  EdgePath path;
  Role role = Role::Attracting;
};

/// f^k(seed). For repelling segments pass the inverse representative as f.
/// Throws NotEG when the seed edge is not in an EG stratum.
LeafSegment leaf_segment(const GraphMap& f, const Filtration& filt, Letter seed, int k,
                         Role role = Role::Attracting);

/// Least n <= n_max such that `target` is a subpath of the cyclic word
/// f^n(sigma).
std::optional<int> weak_attraction_test(const GraphMap& f, const Circuit& sigma, std::span<const Letter> target,
                                        int n_max);

/// Cyclic containment; targets longer than the circuit never occur.
bool occurs_cyclically(std::span<const Letter> cyclic, std::span<const Letter> target);

struct RayPrefix {
  enum class Source { Singular, Translated };
  int start = 0;
  Word letters;
  Source source = Source::Singular;
  Letter seed;               // fixed direction the ray grows from
  int depth = 0;             // iterations used
  Word translation;          // group element applied, for translated rays
  std::size_t consumed = 0;  // prefix letters cancelled by the translation
  bool exhausted = false;    // translation cancelled the whole prefix

  std::size_t size() const { return letters.size(); }
};

/// Stable prefix of f^depth(E): the common prefix of f^depth(E) and
/// f^(depth+1)(E). Throws DirectionNotFixed unless T_f(E) = E.
RayPrefix singular_ray(const GraphMap& f, Letter direction, int depth);

/// Iterates until the stable prefix has at least `letters` letters (or
/// max_depth iterations) and truncates to `letters`. Only a bounded
/// window of each iterate is kept.
RayPrefix singular_ray_prefix(const GraphMap& f, Letter direction, std::size_t letters, int max_depth = 400);

/// tighten(g . ray) in rose letters. The valid part of the result is the
/// uncancelled part of g followed by the surviving ray letters.
RayPrefix translate_ray(std::span<const Letter> g, const RayPrefix& ray);

enum class EndVerdict { NoCommonEnd, Asymptotic, Inconclusive };
const char* to_string(EndVerdict v);

struct EndTest {
  EndVerdict verdict = EndVerdict::Inconclusive;
  std::size_t offset1 = 0;  // when asymptotic: r1[offset1 ..] == r2[offset2 ..]
  std::size_t offset2 = 0;
  std::size_t window = 0;   // letters compared after the offsets
};

/// Tail comparison: rays share an end when they agree after removing finite
/// initial segments. Offsets up to `depth` are tried; agreement needs a
/// window of at least `depth` letters and must persist on the doubled
/// window where available.
EndTest common_end_test(std::span<const Letter> r1, std::span<const Letter> r2, std::size_t depth);

/// Based comparison of two rays issuing from the same point: equal
/// boundary points agree letter by letter. Agreement on fewer than `depth`
/// letters is inconclusive.
EndTest same_point_test(std::span<const Letter> r1, std::span<const Letter> r2, std::size_t depth);

/// One side of a vertex configuration: a cover of the vertex rose with an
/// automorphism of the cover's fundamental group given by forward and
/// inverse representatives on the cover graph.
struct EndData {
  std::string name;
  CoverMap cover;
  GraphMap forward;
  GraphMap inverse;
};

struct BoundaryRay {
  Role role = Role::Attracting;
  int vertex = 0;  // fixed vertex of the cover the ray grows from
  Letter seed;
  Word base;       // rose letters from the cover basepoint
  bool complete = false;
};

/// Fixed points at infinity visible as singular rays of fixed EG directions
/// of the forward (attracting) and inverse (repelling) representatives,
/// written in rose letters from the cover basepoint.
std::vector<BoundaryRay> boundary_rays(const EndData& side, std::size_t letters);

struct IndependenceCell {
  int condition = 1;  // 1: distinct cosets of one side, 2: across sides
  int side_i = 0;
  int side_j = 0;
  int coset_i = 0;
  int coset_j = 0;
  int ray_i = 0;
  int ray_j = 0;
  EndTest test;
};

enum class IndependenceSummary { Independent, Dependent, Inconclusive };
const char* to_string(IndependenceSummary s);

struct IndependenceReport {
  std::string name_i;
  std::string name_j;
  std::size_t depth = 0;  // depth actually used
  bool doubled = false;
  std::vector<BoundaryRay> rays_i;
  std::vector<BoundaryRay> rays_j;
  std::vector<Word> cosets_i;
  std::vector<Word> cosets_j;
  std::vector<IndependenceCell> cells;
  IndependenceSummary summary = IndependenceSummary::Inconclusive;
  std::optional<std::size_t> witness;  // index of a dependent cell
  std::size_t inconclusive = 0;

  std::size_t count(EndVerdict v) const;
};

/// Fixed-point independence of two sides over the same rose. Runs once at
/// `depth` and once more at 2 depth when any cell is inconclusive.
IndependenceReport fixed_point_independence(const EndData& a, const EndData& b, std::size_t depth = 64,
                                            bool auto_double = true);

struct FamilyReport {
  std::vector<IndependenceReport> pairs;
  IndependenceSummary summary = IndependenceSummary::Independent;
};

FamilyReport family_independence(const std::vector<EndData>& sides, std::size_t depth = 64, bool auto_double = true);

}  // namespace fga
