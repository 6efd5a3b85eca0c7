#include "fga/laminations.hpp"

#include <algorithm>

namespace fga {

const char* to_string(Role r) { return r == Role::Attracting ? "attracting" : "repelling"; }

const char* to_string(EndVerdict v) {
  switch (v) {
    case EndVerdict::NoCommonEnd: return "no-common-end-to-depth";
    case EndVerdict::Asymptotic: return "asymptotic-detected";
    case EndVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(IndependenceSummary s) {
  switch (s) {
    case IndependenceSummary::Independent: return "independent-to-depth";
    case IndependenceSummary::Dependent: return "dependent";
    case IndependenceSummary::Inconclusive: return "inconclusive";
  }
  return "?";
}

LeafSegment leaf_segment(const GraphMap& f, const Filtration& filt, Letter seed, int k, Role role) {
  const int r = filt.height(seed);
  if (filt.strata[static_cast<std::size_t>(r)].cls != StratumClass::EG)
    throw Error(ErrorKind::NotEG, "seed " + f.domain().letter_name(seed) + " is not in an EG stratum");
  LeafSegment s;
  s.stratum = r;
  s.seed = seed;
  s.depth = k;
  s.role = role;
  s.path = iterate(f, EdgePath{f.domain().origin(seed), {seed}}, k);
  return s;
}

bool occurs_cyclically(std::span<const Letter> cyclic, std::span<const Letter> target) {
  if (target.empty()) return true;
  if (target.size() > cyclic.size()) return false;
  Word doubled(cyclic.begin(), cyclic.end());
  doubled.insert(doubled.end(), cyclic.begin(), cyclic.begin() + static_cast<std::ptrdiff_t>(target.size() - 1));
  return std::search(doubled.begin(), doubled.end(), target.begin(), target.end()) != doubled.end();
}

std::optional<int> weak_attraction_test(const GraphMap& f, const Circuit& sigma, std::span<const Letter> target,
                                        int n_max) {
  Circuit cur = cyclically_reduce(sigma);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) cur = apply(f, cur);
    if (occurs_cyclically(cur.letters, target)) return n;
  }
  return std::nullopt;
}

namespace {

std::size_t common_prefix(std::span<const Letter> a, std::span<const Letter> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

void require_fixed(const GraphMap& f, Letter direction) {
  if (!f.is_self_map() || f.image(direction).front() != direction)
    throw Error(ErrorKind::DirectionNotFixed, "direction " + f.domain().letter_name(direction) + " is not fixed");
}

}  // namespace

RayPrefix singular_ray(const GraphMap& f, Letter direction, int depth) {
  require_fixed(f, direction);
  const EdgePath e{f.domain().origin(direction), {direction}};
  const EdgePath a = iterate(f, e, depth);
  const EdgePath b = apply(f, a);
  RayPrefix ray;
  ray.start = e.start;
  ray.seed = direction;
  ray.depth = depth;
  ray.letters.assign(a.letters.begin(), a.letters.begin() + static_cast<std::ptrdiff_t>(common_prefix(a.letters, b.letters)));
  return ray;
}

RayPrefix singular_ray_prefix(const GraphMap& f, Letter direction, std::size_t letters, int max_depth) {
  require_fixed(f, direction);
  std::size_t slack = 0;
  for (int e = 0; e < f.domain().num_edges(); ++e) slack += f.image(Letter(e, false)).size();
  const std::size_t cap = 4 * letters + 4 * slack;
  RayPrefix ray;
  ray.start = f.domain().origin(direction);
  ray.seed = direction;
  Word w{direction};
  bool exact = true;  // w is all of f^d(E), not a window
  for (int d = 0; d < max_depth; ++d) {
    Word next = apply(f, EdgePath{ray.start, w}).letters;
    if (!exact) next.resize(next.size() > slack ? next.size() - slack : 0);
    const std::size_t stable = common_prefix(w, next);
    ray.depth = d;
    if (stable >= letters) {
      ray.letters.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(letters));
      return ray;
    }
    if (next.size() > cap) {
      next.resize(cap);
      exact = false;
    }
    if (exact && next == w) break;  // f(E) = E, the ray never grows
    w = std::move(next);
  }
  // could not reach the requested length; return the stable part found
  const Word next = apply(f, EdgePath{ray.start, w}).letters;
  ray.letters.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(letters, common_prefix(w, next))));
  return ray;
}

RayPrefix translate_ray(std::span<const Letter> g, const RayPrefix& ray) {
  RayPrefix out;
  out.source = RayPrefix::Source::Translated;
  out.seed = ray.seed;
  out.depth = ray.depth;
  out.translation = free_reduce(g);
  Word w = out.translation;
  std::size_t i = 0;
  while (i < ray.letters.size() && !w.empty() && w.back() == ray.letters[i].inverse()) {
    w.pop_back();
    ++i;
  }
  out.consumed = i;
  out.exhausted = !ray.letters.empty() && i == ray.letters.size();
  w.insert(w.end(), ray.letters.begin() + static_cast<std::ptrdiff_t>(i), ray.letters.end());
  out.letters = std::move(w);
  return out;
}

EndTest common_end_test(std::span<const Letter> r1, std::span<const Letter> r2, std::size_t depth) {
  EndTest best;
  best.verdict = EndVerdict::NoCommonEnd;
  bool undecided = false;
  for (std::size_t o1 = 0; o1 <= depth && o1 < r1.size(); ++o1)
    for (std::size_t o2 = 0; o2 <= depth && o2 < r2.size(); ++o2) {
      const auto a = r1.subspan(o1), b = r2.subspan(o2);
      const std::size_t w = std::min(a.size(), b.size());
      if (common_prefix(a, b) < w) continue;
      // full agreement: certified only on a window that survives doubling the offset
      if (w >= 2 && w >= 2 * std::max(o1, o2)) {
        best = {EndVerdict::Asymptotic, o1, o2, w};
        return best;
      }
      if (!undecided) {
        undecided = true;
        best.offset1 = o1;
        best.offset2 = o2;
        best.window = w;
      }
    }
  if (undecided || r1.empty() || r2.empty()) best.verdict = EndVerdict::Inconclusive;
  return best;
}

EndTest same_point_test(std::span<const Letter> r1, std::span<const Letter> r2, std::size_t depth) {
  EndTest t;
  const std::size_t w = std::min(r1.size(), r2.size());
  const std::size_t agree = common_prefix(r1, r2);
  t.window = agree;
  if (agree < w) {
    t.verdict = EndVerdict::NoCommonEnd;
  } else {
    t.verdict = w >= depth && depth > 0 ? EndVerdict::Asymptotic : EndVerdict::Inconclusive;
  }
  return t;
}

std::vector<BoundaryRay> boundary_rays(const EndData& side, std::size_t letters) {
  std::vector<BoundaryRay> out;
  const auto paths = tree_paths(side.cover);
  for (Role role : {Role::Attracting, Role::Repelling}) {
    const GraphMap& f = role == Role::Attracting ? side.forward : side.inverse;
    const Filtration filt = compute_filtration(f);
    const TurnTable turns = turn_analysis(f);
    for (Letter e : turns.fixed_directions) {
      if (filt.strata[static_cast<std::size_t>(filt.height(e))].cls != StratumClass::EG) continue;
      BoundaryRay br;
      br.role = role;
      br.seed = e;
      br.vertex = f.domain().origin(e);
      const EdgePath& gamma = paths[static_cast<std::size_t>(br.vertex)];
      const RayPrefix ray = singular_ray_prefix(f, e, letters + gamma.size());
      RayPrefix based = translate_ray(gamma.letters, ray);
      Word base;
      for (Letter l : based.letters) base.push_back(side.cover.label(l));
      br.complete = !based.exhausted && base.size() >= letters;
      if (base.size() > letters) base.resize(letters);
      br.base = std::move(base);
      out.push_back(std::move(br));
    }
  }
  return out;
}

std::size_t IndependenceReport::count(EndVerdict v) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [v](const IndependenceCell& c) { return c.test.verdict == v; }));
}

namespace {

IndependenceReport run_independence(const EndData& a, const EndData& b, std::size_t depth) {
  if (!(a.cover.base() == b.cover.base()))
    throw Error(ErrorKind::Precondition, "sides '" + a.name + "' and '" + b.name + "' cover different roses");
  IndependenceReport rep;
  rep.name_i = a.name;
  rep.name_j = b.name;
  rep.depth = depth;
  for (const auto& p : coset_representatives(a.cover)) rep.cosets_i.push_back(p.letters);
  for (const auto& p : coset_representatives(b.cover)) rep.cosets_j.push_back(p.letters);
  std::size_t longest = 0;
  for (const auto& c : rep.cosets_i) longest = std::max(longest, c.size());
  for (const auto& c : rep.cosets_j) longest = std::max(longest, c.size());
  // enough letters that a translate still shows 2 depth letters
  const std::size_t letters = 2 * depth + longest;
  rep.rays_i = boundary_rays(a, letters);
  rep.rays_j = boundary_rays(b, letters);

  auto translated = [&](const std::vector<Word>& cosets, const std::vector<BoundaryRay>& rays, int c, int r) {
    RayPrefix ray;
    ray.letters = rays[static_cast<std::size_t>(r)].base;
    return translate_ray(cosets[static_cast<std::size_t>(c)], ray);
  };
  auto cell = [&](int condition, int si, int sj, int ci, int cj, int ri, int rj) {
    const auto& cos_i = si == 0 ? rep.cosets_i : rep.cosets_j;
    const auto& cos_j = sj == 0 ? rep.cosets_i : rep.cosets_j;
    const auto& rays_i = si == 0 ? rep.rays_i : rep.rays_j;
    const auto& rays_j = sj == 0 ? rep.rays_i : rep.rays_j;
    const RayPrefix x = translated(cos_i, rays_i, ci, ri);
    const RayPrefix y = translated(cos_j, rays_j, cj, rj);
    IndependenceCell c{condition, si, sj, ci, cj, ri, rj, {}};
    if (x.exhausted || y.exhausted) {
      c.test.verdict = EndVerdict::Inconclusive;
    } else {
      c.test = same_point_test(x.letters, y.letters, depth);
      if (c.test.verdict == EndVerdict::Asymptotic &&
          same_point_test(x.letters, y.letters, 2 * depth).verdict != EndVerdict::Asymptotic)
        c.test.verdict = EndVerdict::Inconclusive;
    }
    rep.cells.push_back(c);
  };
  const int ni = static_cast<int>(rep.rays_i.size()), nj = static_cast<int>(rep.rays_j.size());
  const int ki = static_cast<int>(rep.cosets_i.size()), kj = static_cast<int>(rep.cosets_j.size());
  for (int s = 0; s < 2; ++s) {
    const int k = s == 0 ? ki : kj, n = s == 0 ? ni : nj;
    for (int ci = 0; ci < k; ++ci)
      for (int cj = ci + 1; cj < k; ++cj)
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) cell(1, s, s, ci, cj, x, y);
  }
  for (int ci = 0; ci < ki; ++ci)
    for (int cj = 0; cj < kj; ++cj)
      for (int x = 0; x < ni; ++x)
        for (int y = 0; y < nj; ++y) cell(2, 0, 1, ci, cj, x, y);

  rep.inconclusive = rep.count(EndVerdict::Inconclusive);
  for (std::size_t i = 0; i < rep.cells.size(); ++i)
    if (rep.cells[i].test.verdict == EndVerdict::Asymptotic) {
      rep.witness = i;
      break;
    }
  if (rep.witness) {
    rep.summary = IndependenceSummary::Dependent;
  } else if (rep.inconclusive > 0 || rep.rays_i.empty() || rep.rays_j.empty()) {
    rep.summary = IndependenceSummary::Inconclusive;
  } else {
    rep.summary = IndependenceSummary::Independent;
  }
  return rep;
}

}  // namespace

IndependenceReport fixed_point_independence(const EndData& a, const EndData& b, std::size_t depth, bool auto_double) {
  IndependenceReport rep = run_independence(a, b, depth);
  if (auto_double && rep.inconclusive > 0) {
    rep = run_independence(a, b, 2 * depth);
    rep.doubled = true;
  }
  return rep;
}

FamilyReport family_independence(const std::vector<EndData>& sides, std::size_t depth, bool auto_double) {
  FamilyReport fam;
  for (std::size_t i = 0; i < sides.size(); ++i)
    for (std::size_t j = i + 1; j < sides.size(); ++j)
      fam.pairs.push_back(fixed_point_independence(sides[i], sides[j], depth, auto_double));
  for (const auto& p : fam.pairs) {
    if (p.summary == IndependenceSummary::Dependent) {
      fam.summary = IndependenceSummary::Dependent;
      break;
    }
    if (p.summary == IndependenceSummary::Inconclusive) fam.summary = IndependenceSummary::Inconclusive;
  }
  return fam;
}

}  // namespace fga
