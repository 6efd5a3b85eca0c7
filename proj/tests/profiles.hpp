#pragma once

// Synthetic hallway length profiles for the concatenation predicate.
//
// A profile is two automorphism chains glued at an original vertex. Along a
// chain the length is A mu^(i-s) + B mu^(s-i), log-convex with growth mu. At
// the junction the lengths agree (covering transfer preserves length). The
// standing flaring assumption at the junction is imposed by rejection: every
// window centred there with half-length at least N/2 flares.

#include <cmath>
#include <optional>
#include <vector>

#include "fga/regluing.hpp"
#include "fga/rng.hpp"

namespace profiles {

inline double uniform(fga::SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

// Naive flaring check with the same central-value convention as the library:
// for an odd window the larger of the two middle values is central.
inline bool flares(const std::vector<double>& p, std::size_t a, std::size_t b, double lambda = 2.0) {
  if (b <= a || b >= p.size()) return false;
  double center = p[(a + b) / 2];
  if ((b - a) % 2 == 1) center = std::max(center, p[(a + b) / 2 + 1]);
  return lambda * center <= std::max(p[a], p[b]);
}

struct Model {
  double mu_min = 1.5;
  double mu_max = 4.0;

  // Half-lengths from which a single chain flares: mu^h >= 2 + sqrt 3.
  std::size_t overlap_min() const {
    return 2 * static_cast<std::size_t>(std::ceil(std::log(2.0 + std::sqrt(3.0)) / std::log(mu_min)));
  }

  std::vector<double> chain(std::size_t n, double start, fga::SplitMix64& rng) const {
    const double mu = uniform(rng, mu_min, mu_max);
    const double a = uniform(rng, 0.1, 10.0), b = uniform(rng, 0.1, 10.0);
    const double s = uniform(rng, -0.5 * static_cast<double>(n), 1.5 * static_cast<double>(n));
    std::vector<double> q;
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) - s;
      q.push_back(a * std::pow(mu, x) + b * std::pow(mu, -x));
    }
    const double k = start / q.front();
    for (double& v : q) v *= k;
    return q;
  }

  struct Spliced {
    std::vector<double> profile;
    std::size_t junction = 0;
  };

  Spliced spliced(fga::SplitMix64& rng) const {
    const std::size_t n = overlap_min();
    const std::size_t len = 2 * n + rng.below(2 * n + 1);
    Spliced s;
    s.profile = chain(len, 1.0, rng);
    const auto second = chain(len, s.profile.back(), rng);
    s.profile.insert(s.profile.end(), second.begin() + 1, second.end());
    s.junction = len;
    return s;
  }

  bool junction_flares(const Spliced& s) const {
    for (std::size_t h = overlap_min() / 2; h <= s.junction; ++h)
      if (!flares(s.profile, s.junction - h, s.junction + h)) return false;
    return true;
  }

  // Profile satisfying the junction assumption.
  Spliced hallway(fga::SplitMix64& rng) const {
    while (true) {
      Spliced s = spliced(rng);
      if (junction_flares(s)) return s;
    }
  }
};

struct Pair {
  fga::Window first;
  fga::Window second;
};

// a < c < b < d with b - c in [overlap_lo, overlap_hi].
inline std::optional<Pair> windows(std::size_t len, std::size_t overlap_lo, std::size_t overlap_hi,
                                   fga::SplitMix64& rng) {
  if (len < overlap_lo + 4) return std::nullopt;
  const std::size_t c = 1 + rng.below(len - overlap_lo - 3);
  const std::size_t b_max = std::min(len - 2, c + overlap_hi);
  if (b_max < c + overlap_lo) return std::nullopt;
  const std::size_t b = c + overlap_lo + rng.below(b_max - c - overlap_lo + 1);
  const std::size_t a = rng.below(c);
  const std::size_t d = b + 1 + rng.below(len - 1 - b);
  return Pair{{a, b}, {c, d}};
}

// Both windows flare, the union does not, overlap o: ones everywhere except
// the left ends of the windows (4 and 2) and the centre of the union (100).
// The 4 covers o = h, where the second window starts at the first's centre.
inline std::vector<double> counterexample(std::size_t h, std::size_t o, Pair& w) {
  const std::size_t len = 4 * h - o + 1;
  std::vector<double> p(len, 1.0);
  w = Pair{{0, 2 * h}, {2 * h - o, 4 * h - o}};
  p[0] = 4.0;
  p[2 * h - o] = 2.0;
  const std::size_t mid = (4 * h - o) / 2;
  p[(4 * h - o) % 2 == 1 && mid == 2 * h - o ? mid + 1 : mid] = 100.0;
  return p;
}

}  // namespace profiles
