#pragma once

// Bounded cancellation, critical constants and legality ratios.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fga/graph_map.hpp"

namespace fga {

struct BccEstimate {
  std::size_t bound = 0;      // sum of |f(E)| over positive edges
  std::size_t empirical = 0;  // worst cancellation over reduced two-letter paths
};

BccEstimate bcc_bound(const GraphMap& f);

/// Letters cancelled at the junction when tightening f(p) f(q); p q must be
/// a reduced path.
std::size_t junction_cancellation(const GraphMap& f, const EdgePath& p, const EdgePath& q);

/// 2 bcc / (lambda - 1). Throws NotEG unless lambda > 1.
double critical_constant(double lambda, double bcc);

enum class LegMode { Leaf, Legal };
const char* to_string(LegMode m);

struct LegalityOptions {
  LegMode mode = LegMode::Leaf;
  int leaf_depth = 24;                    // largest K for the f^K(E) corpus
  std::size_t corpus_cap = std::size_t{1} << 19;  // letters per stratum
};

struct LegSegment {
  std::size_t begin = 0;  // half-open letter range
  std::size_t end = 0;
  std::size_t weight = 0;  // H_r letters in the range
};

struct LegResult {
  double ratio = 0;
  std::size_t qualifying = 0;  // L(alpha)
  std::size_t length = 0;
  std::vector<LegSegment> segments;
};

/// Precomputed data for LEG queries against one map: filtration, turns,
/// critical constants and, in leaf mode, one suffix automaton per EG
/// stratum over {f^K(E)}.
class LegalityContext {
 public:
  LegalityContext(const GraphMap& f, LegalityOptions opts = {});
  ~LegalityContext();
  LegalityContext(LegalityContext&&) noexcept;
  LegalityContext& operator=(LegalityContext&&) noexcept;

  const GraphMap& map() const { return f_; }
  const Filtration& filtration() const { return filt_; }
  const TurnTable& turns() const { return turns_; }
  const LegalityOptions& options() const { return opts_; }
  const BccEstimate& bcc() const { return bcc_; }
  /// Critical constant of EG stratum r.
  double critical(int r) const;
  /// Depth K actually used for stratum r's leaf corpus.
  int leaf_depth(int r) const;

  /// Best decomposition of alpha into qualifying H_r segments. Throws
  /// Precondition when alpha leaves H_r and the zero strata.
  LegResult leg_r(std::span<const Letter> alpha, int r) const;
  /// Componentwise legality over all EG strata.
  LegResult leg(std::span<const Letter> beta) const;
  LegResult leg(const Circuit& beta) const;

 private:
  struct Corpus;
  GraphMap f_;
  LegalityOptions opts_;
  Filtration filt_;
  TurnTable turns_;
  BccEstimate bcc_;
  std::vector<double> critical_;  // by stratum, 0 for non-EG
  std::vector<int> depth_;
  std::vector<std::unique_ptr<Corpus>> corpus_;
};

struct LegalityRow {
  int n = 0;
  std::size_t length = 0;
  double leg = 0;
  std::size_t qualifying = 0;
  std::size_t segments = 0;
};

struct LegalityGrowth {
  std::vector<LegalityRow> rows;
  std::optional<int> n0;  // first index after which LEG stays positive
  double epsilon = 0;      // min LEG over rows n >= n0
};

LegalityGrowth legality_growth_test(const LegalityContext& ctx, const Circuit& beta, int n_max);

struct GrowthResult {
  std::optional<int> n1;
  std::vector<std::size_t> lengths;  // |f^n(beta)| for n = 0..n_max
};

/// Smallest N1 <= n_max from which the length stays above A |beta|. The
/// comparison is strict for A > 1 and non-strict otherwise.
GrowthResult growth_test(const GraphMap& f, const Circuit& beta, double factor, int n_max);

}  // namespace fga
