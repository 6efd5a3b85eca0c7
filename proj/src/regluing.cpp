#include "fga/regluing.hpp"

#include <algorithm>
#include <set>

namespace fga {

int GraphOfRoses::vertex_index(const std::string& n) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].name == n) return static_cast<int>(i);
  throw Error(ErrorKind::Structural, "unknown base vertex '" + n + "'");
}

std::optional<EdgePath> inner_witness(const GraphMap& psi) {
  const MarkedGraph& g = psi.domain();
  const std::vector<EdgePath> basis = fundamental_basis(g, 0);
  if (basis.empty()) return std::nullopt;
  std::vector<Word> u;
  for (const auto& loop : basis) u.push_back(contract_tree(g, apply(psi, loop)));
  // u[0] = c' g0 c'^-1 with no cancellation
  const Word& u0 = u[0];
  const Letter g0(0, false);
  if (u0.size() % 2 == 0 || u0[u0.size() / 2] != g0) return basis[0];
  const std::size_t half = u0.size() / 2;
  const Word c(u0.begin(), u0.begin() + static_cast<std::ptrdiff_t>(half));
  if (Word(u0.begin() + static_cast<std::ptrdiff_t>(half) + 1, u0.end()) != inverse_word(c)) return basis[0];
  auto strip = [&](const Word& w) {
    Word x = inverse_word(c);
    x.insert(x.end(), w.begin(), w.end());
    x.insert(x.end(), c.begin(), c.end());
    return free_reduce(x);
  };
  // remaining freedom: c = c' g0^k, read k off the second generator
  long k = 0;
  if (basis.size() > 1) {
    const Word v1 = strip(u[1]);
    for (Letter l : v1) {
      if (l.edge() != 0) break;
      k += l.inverted() ? -1 : 1;
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Word expect;
    if (i == 0) {
      expect = {g0};
    } else {
      const Letter p = k >= 0 ? g0 : g0.inverse();
      expect.assign(static_cast<std::size_t>(std::labs(k)), p);
      expect.push_back(Letter(static_cast<int>(i), false));
      expect.insert(expect.end(), static_cast<std::size_t>(std::labs(k)), p.inverse());
    }
    if (strip(u[i]) != expect) return basis[i];
  }
  return std::nullopt;
}

SystemReport validate_system(const GraphOfRoses& g, const RegluingSpec& spec) {
  if (spec.edges.size() != g.edges.size())
    throw Error(ErrorKind::Structural, "automorphism data for " + std::to_string(spec.edges.size()) +
                                           " edges, system has " + std::to_string(g.edges.size()));
  if (spec.power < 1) throw Error(ErrorKind::Precondition, "global power must be positive");
  SystemReport rep;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const BaseEdge& e = g.edges[i];
    const EdgeAutomorphism& a = spec.edges[i];
    const std::string where = "edge '" + e.name + "': ";
    if (a.exponent < 1) throw Error(ErrorKind::Precondition, where + "exponent must be positive");
    for (bool v_end : {false, true}) {
      const CoverMap& c = v_end ? e.attach_v : e.attach_u;
      const BaseVertex& bv = g.vertices.at(static_cast<std::size_t>(v_end ? e.v : e.u));
      const char* end = v_end ? "attach_v" : "attach_u";
      if (!(c.base() == bv.rose))
        throw Error(ErrorKind::NotACovering, where + end + " does not cover the rose of '" + bv.name + "'");
      if (!(c.total() == e.space))
        throw Error(ErrorKind::NotACovering, where + end + " is not defined on the edge space");
    }
    for (const GraphMap* f : {&a.phi, &a.phi_inv}) {
      if (!(f->domain() == e.space) || !(f->codomain() == e.space))
        throw Error(ErrorKind::Structural, where + "map '" + f->name() + "' is not a self map of the edge space");
      if (!pi1_check(*f).isomorphism)
        throw Error(ErrorKind::Structural, where + "map '" + f->name() + "' is not a pi_1 isomorphism");
    }
    for (const auto& psi : {compose(a.phi, a.phi_inv), compose(a.phi_inv, a.phi)})
      if (auto w = inner_witness(psi))
        throw Error(ErrorKind::InverseMismatch,
                    where + "phi and phi_inv are not inverse; witness basis loop " + e.space.format(w->letters));
    EdgeValidation ev;
    ev.edge = e.name;
    ev.degree_u = e.attach_u.degree();
    ev.degree_v = e.attach_v.degree();
    ev.space_rank = e.space.rank();
    const GraphMap back = compose(a.phi_inv, a.phi);
    ev.exact_inverse = true;
    for (int x = 0; x < e.space.num_edges(); ++x)
      ev.exact_inverse = ev.exact_inverse && back.image(Letter(x, false)) == Word{Letter(x, false)};
    rep.edges.push_back(ev);
  }
  return rep;
}

int SubdividedBase::num_original() const {
  return static_cast<int>(std::count_if(vertices.begin(), vertices.end(), [](const Vertex& v) { return v.original; }));
}

int SubdividedBase::chain_vertex(const GraphOfRoses& g, int e, int k) const {
  const int n = chain_length.at(static_cast<std::size_t>(e));
  if (k < 0 || k > n) throw Error(ErrorKind::Precondition, "chain position out of range");
  if (k == 0) return g.edges[static_cast<std::size_t>(e)].u;
  if (k == n) return g.edges[static_cast<std::size_t>(e)].v;
  return chain_start[static_cast<std::size_t>(e)] + k - 1;
}

SubdividedBase subdivide(const GraphOfRoses& g, const RegluingSpec& spec) {
  SubdividedBase s;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) s.vertices.push_back({true, static_cast<int>(v), -1, 0});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const int n = spec.edges.at(e).exponent;
    if (n < 1) throw Error(ErrorKind::Precondition, "exponent must be positive");
    s.chain_length.push_back(n);
    s.chain_start.push_back(static_cast<int>(s.vertices.size()));
    for (int k = 1; k < n; ++k) s.vertices.push_back({false, -1, static_cast<int>(e), k});
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (int k = 0; k < s.chain_length[e]; ++k)
      s.edges.push_back({s.chain_vertex(g, static_cast<int>(e), k), s.chain_vertex(g, static_cast<int>(e), k + 1),
                         static_cast<int>(e), k});
  return s;
}

std::vector<std::size_t> SpecialHallway::profile() const {
  std::vector<std::size_t> p;
  for (const auto& v : verticals) p.push_back(v.length());
  return p;
}

std::size_t SpecialHallway::girth() const {
  std::size_t g = verticals.empty() ? 0 : verticals.front().length();
  for (const auto& v : verticals) g = std::min(g, v.length());
  return g;
}

EdgePath lift_word(const CoverMap& cover, const Word& base_word, int fiber) {
  return lift_path(cover, EdgePath{0, base_word}, fiber);
}

Word random_reduced_path(const MarkedGraph& g, int start, std::size_t length, SplitMix64& rng) {
  Word w;
  int at = start;
  std::vector<Letter> options;
  while (w.size() < length) {
    options.clear();
    for (Letter l : g.directions_at(at))
      if (w.empty() || l != w.back().inverse()) options.push_back(l);
    if (options.empty()) break;
    const Letter l = options[rng.below(options.size())];
    w.push_back(l);
    at = g.terminus(l);
  }
  return w;
}

HallwayEngine::HallwayEngine(GraphOfRoses g, RegluingSpec spec) : g_(std::move(g)), spec_(std::move(spec)) {
  sub_ = subdivide(g_, spec_);
  for (const auto& a : spec_.edges) {
    fwd_.push_back(power(a.phi, spec_.power));
    bwd_.push_back(power(a.phi_inv, spec_.power));
    lip_fwd_.push_back(fwd_.back().lipschitz());
    lip_bwd_.push_back(bwd_.back().lipschitz());
    const GraphMap back = compose(bwd_.back(), fwd_.back());
    bool exact = true;
    for (int x = 0; x < back.domain().num_edges(); ++x)
      exact = exact && back.image(Letter(x, false)) == Word{Letter(x, false)};
    exact_inverse_.push_back(exact);
  }
  departures_.resize(g_.vertices.size());
  for (std::size_t e = 0; e < g_.edges.size(); ++e)
    for (bool v_end : {false, true}) {
      const BaseEdge& be = g_.edges[e];
      const int x = v_end ? be.v : be.u;
      const int degree = (v_end ? be.attach_v : be.attach_u).degree();
      for (int f = 0; f < degree; ++f)
        departures_[static_cast<std::size_t>(x)].push_back({static_cast<int>(e), v_end, f});
    }
}

const CoverMap& HallwayEngine::attachment(int e, bool v_end) const {
  const BaseEdge& be = g_.edges.at(static_cast<std::size_t>(e));
  return v_end ? be.attach_v : be.attach_u;
}

SpecialHallway HallwayEngine::propagate(const HallwayRequest& req) const {
  if (req.center < 0 || req.center >= static_cast<int>(sub_.vertices.size()))
    throw Error(ErrorKind::Precondition, "hallway center is not a subdivided vertex");
  if (req.m < 0) throw Error(ErrorKind::Precondition, "negative hallway half-length");
  SpecialHallway h;
  h.m = req.m;
  h.center = req.center;
  h.verticals.resize(static_cast<std::size_t>(2 * req.m + 1));
  std::optional<SplitMix64> rng;
  if (req.seed) rng.emplace(*req.seed);
  std::array<std::size_t, 2> used{0, 0};

  auto next_departure = [&](int side, int x, const std::optional<Departure>& avoid) {
    const auto& given = req.departures[static_cast<std::size_t>(side)];
    Departure d;
    if (used[static_cast<std::size_t>(side)] < given.size()) {
      d = given[used[static_cast<std::size_t>(side)]++];
      const auto& all = departures(x);
      if (std::find(all.begin(), all.end(), d) == all.end())
        throw Error(ErrorKind::Precondition, "departure is not a tree edge at this vertex");
      if (avoid && d == *avoid) throw Error(ErrorKind::Precondition, "departure backtracks");
    } else if (rng) {
      std::vector<Departure> options;
      for (const auto& c : departures(x))
        if (!avoid || !(c == *avoid)) options.push_back(c);
      if (options.empty()) throw Error(ErrorKind::Precondition, "dead end in the base tree");
      d = options[rng->below(options.size())];
    } else {
      throw Error(ErrorKind::Precondition, "coset choice count mismatch: too few departures");
    }
    h.departures[static_cast<std::size_t>(side)].push_back(d);
    return d;
  };

  struct State {
    int edge = 0;
    int level = 0;
    int dir = 1;
    EdgePath word;
    bool at_vertex = false;
    Word rose_word;
    Departure arrival;
  };

  auto enter = [&](State& s, const Departure& d, const Word& rose_word) {
    const CoverMap& c = attachment(d.edge, d.v_end);
    s.edge = d.edge;
    s.level = d.v_end ? sub_.chain_length[static_cast<std::size_t>(d.edge)] : 0;
    s.dir = d.v_end ? -1 : 1;
    s.word = lift_word(c, rose_word, d.fiber);
    s.at_vertex = false;
    if (s.word.size() != rose_word.size()) h.lengths_preserved = false;
  };

  std::array<State, 2> side;
  const auto& cv = sub_.vertices[static_cast<std::size_t>(req.center)];
  if (cv.original) {
    const MarkedGraph& rose = g_.vertices[static_cast<std::size_t>(cv.base_vertex)].rose;
    check_path(rose, EdgePath{0, req.midpoint});
    if (!is_reduced(req.midpoint)) throw Error(ErrorKind::Precondition, "midpoint word is not reduced");
    h.verticals[static_cast<std::size_t>(req.m)] = {req.center, -1, 0, req.midpoint};
    if (req.m > 0) {
      const Departure d0 = next_departure(0, cv.base_vertex, std::nullopt);
      const Departure d1 = next_departure(1, cv.base_vertex, d0);
      enter(side[0], d0, req.midpoint);
      enter(side[1], d1, req.midpoint);
    }
  } else {
    const MarkedGraph& space = g_.edges[static_cast<std::size_t>(cv.edge)].space;
    if (req.anchor < 0 || req.anchor >= space.num_vertices())
      throw Error(ErrorKind::Precondition, "inconsistent anchor: not a vertex of the edge space");
    const EdgePath mid{req.anchor, req.midpoint};
    check_path(space, mid);
    if (!is_reduced(req.midpoint)) throw Error(ErrorKind::Precondition, "midpoint word is not reduced");
    h.verticals[static_cast<std::size_t>(req.m)] = {req.center, cv.edge, req.anchor, req.midpoint};
    for (int s = 0; s < 2; ++s) {
      side[static_cast<std::size_t>(s)].edge = cv.edge;
      side[static_cast<std::size_t>(s)].level = cv.position;
      side[static_cast<std::size_t>(s)].dir = s == 0 ? -1 : 1;
      side[static_cast<std::size_t>(s)].word = mid;
    }
  }

  for (int s = 0; s < 2; ++s) {
    State& st = side[static_cast<std::size_t>(s)];
    for (int i = 1; i <= req.m; ++i) {
      if (st.at_vertex) {
        const BaseEdge& be = g_.edges[static_cast<std::size_t>(st.arrival.edge)];
        const int x = st.arrival.v_end ? be.v : be.u;
        enter(st, next_departure(s, x, st.arrival), st.rose_word);
      }
      const auto e = static_cast<std::size_t>(st.edge);
      const std::size_t before = st.word.size();
      st.word = apply(st.dir > 0 ? fwd_[e] : bwd_[e], st.word);
      st.level += st.dir;
      const std::size_t after = st.word.size();
      const std::size_t lip_out = st.dir > 0 ? lip_fwd_[e] : lip_bwd_[e];
      const std::size_t lip_back = st.dir > 0 ? lip_bwd_[e] : lip_fwd_[e];
      if (after > lip_out * before || (exact_inverse_[e] && before > lip_back * after)) h.lipschitz_ok = false;
      const auto pos = static_cast<std::size_t>(s == 0 ? req.m - i : req.m + i);
      const int n = sub_.chain_length[e];
      if (st.level == 0 || st.level == n) {
        const bool v_end = st.level == n;
        const BaseEdge& be = g_.edges[e];
        st.rose_word = project_path(attachment(st.edge, v_end), st.word).letters;
        st.arrival = {st.edge, v_end, st.word.start};
        st.at_vertex = true;
        ++h.crossings;
        h.verticals[pos] = {v_end ? be.v : be.u, -1, 0, st.rose_word};
      } else {
        h.verticals[pos] = {sub_.chain_vertex(g_, st.edge, st.level), st.edge, st.word.start, st.word.letters};
      }
    }
  }
  for (int s = 0; s < 2; ++s)
    if (used[static_cast<std::size_t>(s)] < req.departures[static_cast<std::size_t>(s)].size())
      throw Error(ErrorKind::Precondition, "coset choice count mismatch: unused departures");
  return h;
}

SpecialHallway propagate_hallway(const HallwayEngine& engine, const HallwayRequest& req) {
  return engine.propagate(req);
}

const char* to_string(FlareVerdict v) {
  switch (v) {
    case FlareVerdict::Pass: return "pass";
    case FlareVerdict::Fail: return "fail";
    case FlareVerdict::BelowGirth: return "below-girth";
  }
  return "?";
}

FlareVerdict flare_check(std::span<const std::size_t> profile, double lambda, std::size_t girth_threshold) {
  if (profile.empty() || profile.size() % 2 == 0) throw Error(ErrorKind::Precondition, "profile needs odd length");
  if (*std::min_element(profile.begin(), profile.end()) < girth_threshold) return FlareVerdict::BelowGirth;
  const std::size_t mid = profile.size() / 2;
  const double end = static_cast<double>(std::max(profile.front(), profile.back()));
  return lambda * static_cast<double>(profile[mid]) <= end ? FlareVerdict::Pass : FlareVerdict::Fail;
}

FlareVerdict flare_check(const SpecialHallway& h, double lambda, std::size_t girth_threshold) {
  const auto p = h.profile();
  return flare_check(p, lambda, girth_threshold);
}

bool window_flares(std::span<const double> profile, Window w, double lambda) {
  if (w.end <= w.begin || w.end >= profile.size()) return false;
  const std::size_t mid = (w.begin + w.end) / 2;
  double center = profile[mid];
  if ((w.end - w.begin) % 2 == 1) center = std::max(center, profile[mid + 1]);
  return lambda * center <= std::max(profile[w.begin], profile[w.end]);
}

ConcatenationCheck concatenation_check(std::span<const double> profile, Window first, Window second,
                                       std::size_t overlap_min, double lambda) {
  ConcatenationCheck c;
  const bool shape = first.begin < second.begin && second.begin < first.end && first.end < second.end &&
                     second.end < profile.size();
  c.hypotheses = shape && first.end - second.begin >= overlap_min && window_flares(profile, first, lambda) &&
                 window_flares(profile, second, lambda);
  c.conclusion = shape && window_flares(profile, {first.begin, second.end}, lambda);
  return c;
}

StretchResult all_but_one_verdict(std::vector<std::size_t> lengths, std::size_t tau_length) {
  StretchResult r;
  r.lengths = std::move(lengths);
  r.threshold = 2 * tau_length;
  for (auto l : r.lengths)
    if (l > r.threshold) ++r.grown;
  const std::size_t k = r.lengths.size() / 2;
  r.pass = k > 0 && r.grown + 1 >= 2 * k;
  return r;
}

namespace {

struct EndRef {
  int edge;
  bool v_end;
};

std::vector<EndRef> ends_at(const GraphOfRoses& g, int vertex) {
  std::vector<EndRef> out;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (g.edges[e].u == vertex) out.push_back({static_cast<int>(e), false});
    if (g.edges[e].v == vertex) out.push_back({static_cast<int>(e), true});
  }
  return out;
}

}  // namespace

StretchResult all_but_one(const HallwayEngine& engine, int vertex, const Word& tau, int m) {
  std::vector<std::size_t> lengths;
  for (const EndRef& end : ends_at(engine.graph(), vertex)) {
    const CoverMap& c = engine.attachment(end.edge, end.v_end);
    const EdgePath lifted = lift_word(c, tau, c.basepoint());
    lengths.push_back(iterate(engine.forward(end.edge), lifted, m).size());
    lengths.push_back(iterate(engine.backward(end.edge), lifted, m).size());
  }
  return all_but_one_verdict(std::move(lengths), tau.size());
}

StretchResult three_of_four(const HallwayEngine& engine, int vertex, const Word& tau, int m) {
  if (ends_at(engine.graph(), vertex).size() != 2)
    throw Error(ErrorKind::Precondition, "three_of_four needs exactly two edge ends at the vertex");
  return all_but_one(engine, vertex, tau, m);
}

StretchSurvey stretch_survey(const HallwayEngine& engine, int vertex, const StretchConfig& cfg) {
  StretchSurvey sv;
  sv.vertex = vertex;
  const MarkedGraph& rose = engine.graph().vertices.at(static_cast<std::size_t>(vertex)).rose;
  std::vector<std::size_t> lengths = cfg.lengths;
  std::sort(lengths.begin(), lengths.end());
  if (cfg.samples == 0) return sv;
  const SplitMix64 root(cfg.seed);
  for (std::size_t len : lengths)
    for (int m = 1; m <= cfg.m_max; ++m) {
      StretchRow row{len, m, cfg.samples, 0};
      const SplitMix64 cell = root.split(len).split(static_cast<std::uint64_t>(m));
      for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = cell.split(i);
        const Word tau = random_reduced_path(rose, 0, len, rng);
        StretchResult r = all_but_one(engine, vertex, tau, m);
        if (r.pass) {
          ++row.passed;
        } else {
          ++sv.failure_count;
          if (sv.failures.size() < cfg.max_failures) sv.failures.push_back({len, m, i, tau, std::move(r.lengths)});
        }
      }
      sv.rows.push_back(row);
    }
  // smallest L admitting some M, then the smallest such M
  for (std::size_t li = 0; li < lengths.size() && !sv.l_estimate; ++li)
    for (int m = 1; m <= cfg.m_max; ++m) {
      bool ok = true;
      for (const auto& row : sv.rows)
        if (row.length >= lengths[li] && row.m >= m && row.fraction() < cfg.threshold) ok = false;
      if (ok) {
        sv.l_estimate = lengths[li];
        sv.m_estimate = m;
        break;
      }
    }
  return sv;
}

SpecialHallway sample_hallway(const HallwayEngine& engine, int m, std::uint64_t seed, std::size_t sample,
                              std::size_t word_min, std::size_t word_max, bool near_original) {
  SplitMix64 rng = SplitMix64(seed).split(sample);
  const SubdividedBase& sub = engine.base();
  const GraphOfRoses& g = engine.graph();
  HallwayRequest req;
  req.m = m;
  if (near_original) {
    const int x = static_cast<int>(rng.below(g.vertices.size()));
    const auto& deps = engine.departures(x);
    const Departure d = deps[rng.below(deps.size())];
    const int n = sub.chain_length[static_cast<std::size_t>(d.edge)];
    const int dist = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(m, n) + 1)));
    req.center = sub.chain_vertex(g, d.edge, d.v_end ? n - dist : dist);
  } else {
    req.center = static_cast<int>(rng.below(sub.vertices.size()));
  }
  const auto& cv = sub.vertices[static_cast<std::size_t>(req.center)];
  const MarkedGraph& space = cv.original ? g.vertices[static_cast<std::size_t>(cv.base_vertex)].rose
                                         : g.edges[static_cast<std::size_t>(cv.edge)].space;
  const std::size_t len = word_min + rng.below(word_max - word_min + 1);
  req.anchor = static_cast<int>(rng.below(static_cast<std::uint64_t>(space.num_vertices())));
  req.midpoint = random_reduced_path(space, req.anchor, len, rng);
  req.seed = rng.next();
  return engine.propagate(req);
}

FlareReport flare_report(const HallwayEngine& engine, int n, const FlareConfig& cfg) {
  FlareReport rep;
  rep.n = n;
  if (cfg.word_min == 0 || cfg.word_max < cfg.word_min) throw Error(ErrorKind::Precondition, "bad word length range");
  const SplitMix64 root = SplitMix64(cfg.seed).split(static_cast<std::uint64_t>(n));
  for (int m = 1; m <= cfg.m_max; ++m) {
    FlareRow row;
    row.m = m;
    const std::uint64_t cell = root.split(static_cast<std::uint64_t>(m)).next();
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const SpecialHallway h = sample_hallway(engine, m, cell, i, cfg.word_min, cfg.word_max);
      const auto profile = h.profile();
      switch (flare_check(profile, cfg.lambda, cfg.girth)) {
        case FlareVerdict::Pass: ++row.passed; break;
        case FlareVerdict::BelowGirth: ++row.below_girth; break;
        case FlareVerdict::Fail:
          ++row.failed;
          rep.witnesses.push_back({m, i, h.center, profile, h.departures});
          break;
      }
    }
    rep.rows.push_back(row);
  }
  const std::uint64_t short_seed = root.split(0).next();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const SpecialHallway h = sample_hallway(engine, cfg.short_m, short_seed, i, cfg.word_min, cfg.word_max, true);
    const double a = static_cast<double>(std::max<std::size_t>(1, h.length(-h.m)));
    const double b = static_cast<double>(std::max<std::size_t>(1, h.length(h.m)));
    rep.c0 = std::max(rep.c0, std::max(a / b, b / a));
  }
  if (!rep.rows.empty()) rep.pass_fraction = rep.rows.back().fraction();
  for (int k = static_cast<int>(rep.rows.size()); k > 0; --k) {
    const FlareRow& row = rep.rows[static_cast<std::size_t>(k - 1)];
    if (row.passed + row.failed == 0 || row.fraction() < cfg.threshold) break;
    rep.n0 = row.m;
  }
  rep.meets = rep.n0.has_value();
  return rep;
}

ExponentSearch exponent_search(const GraphOfRoses& g, const RegluingSpec& spec, const FlareConfig& cfg) {
  ExponentSearch out;
  std::vector<int> candidates = cfg.candidates;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (int n : candidates) {
    if (n < 1) throw Error(ErrorKind::Precondition, "candidate exponents must be positive");
    RegluingSpec s = spec;
    for (auto& e : s.edges) e.exponent = n;
    const HallwayEngine engine(g, std::move(s));
    out.reports.push_back(flare_report(engine, n, cfg));
    if (!out.smallest && out.reports.back().meets) out.smallest = n;
  }
  return out;
}

std::vector<EndData> vertex_ends(const GraphOfRoses& g, const RegluingSpec& spec, int vertex) {
  std::vector<EndData> out;
  for (const EndRef& end : ends_at(g, vertex)) {
    const BaseEdge& be = g.edges[static_cast<std::size_t>(end.edge)];
    const EdgeAutomorphism& a = spec.edges.at(static_cast<std::size_t>(end.edge));
    const GraphMap f = power(a.phi, spec.power), b = power(a.phi_inv, spec.power);
    if (end.v_end) {
      out.push_back({be.name + ":v", be.attach_v, b, f});
    } else {
      out.push_back({be.name + ":u", be.attach_u, f, b});
    }
  }
  return out;
}

}  // namespace fga
