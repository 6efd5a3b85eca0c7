#include "fga/legality.hpp"

#include <algorithm>
#include <deque>

namespace fga {

std::size_t junction_cancellation(const GraphMap& f, const EdgePath& p, const EdgePath& q) {
  const EdgePath a = apply(f, p);
  const EdgePath b = apply(f, q);
  const EdgePath c = concat_tighten(f.codomain(), a, b);
  return (a.size() + b.size() - c.size()) / 2;
}

BccEstimate bcc_bound(const GraphMap& f) {
  const MarkedGraph& g = f.domain();
  BccEstimate est;
  for (int e = 0; e < g.num_edges(); ++e) est.bound += f.image(Letter(e, false)).size();
  for (int c = 0; c < g.num_letters(); ++c) {
    const Letter x = Letter::from_code(static_cast<std::uint32_t>(c));
    const int v = g.terminus(x);
    for (Letter y : g.directions_at(v)) {
      if (y == x.inverse()) continue;
      est.empirical =
          std::max(est.empirical, junction_cancellation(f, EdgePath{g.origin(x), {x}}, EdgePath{v, {y}}));
    }
  }
  return est;
}

double critical_constant(double lambda, double bcc) {
  if (!(lambda > 1.0)) throw Error(ErrorKind::NotEG, "critical constant needs lambda > 1");
  return 2.0 * bcc / (lambda - 1.0);
}

const char* to_string(LegMode m) { return m == LegMode::Leaf ? "leaf" : "legal"; }

// Suffix automaton over the concatenated leaf words, separated by a symbol
// outside the letter alphabet.
struct LegalityContext::Corpus {
  std::size_t sigma = 0;
  std::vector<int> len;
  std::vector<int> link;
  std::vector<int> next;  // sigma entries per state
  int last = 0;

  explicit Corpus(std::size_t alphabet) : sigma(alphabet) { add_state(0, -1); }

  int add_state(int l, int lk) {
    len.push_back(l);
    link.push_back(lk);
    next.resize(next.size() + sigma, -1);
    return static_cast<int>(len.size()) - 1;
  }
  int& go(int s, std::size_t c) { return next[static_cast<std::size_t>(s) * sigma + c]; }
  int go(int s, std::size_t c) const { return next[static_cast<std::size_t>(s) * sigma + c]; }

  void extend(std::size_t c) {
    const int cur = add_state(len[static_cast<std::size_t>(last)] + 1, -1);
    int p = last;
    while (p != -1 && go(p, c) == -1) {
      go(p, c) = cur;
      p = link[static_cast<std::size_t>(p)];
    }
    if (p == -1) {
      link[static_cast<std::size_t>(cur)] = 0;
    } else {
      const int q = go(p, c);
      if (len[static_cast<std::size_t>(p)] + 1 == len[static_cast<std::size_t>(q)]) {
        link[static_cast<std::size_t>(cur)] = q;
      } else {
        const int clone = add_state(len[static_cast<std::size_t>(p)] + 1, link[static_cast<std::size_t>(q)]);
        std::copy_n(next.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(q) * sigma), sigma,
                    next.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(clone) * sigma));
        while (p != -1 && go(p, c) == q) {
          go(p, c) = clone;
          p = link[static_cast<std::size_t>(p)];
        }
        link[static_cast<std::size_t>(q)] = link[static_cast<std::size_t>(cur)] = clone;
      }
    }
    last = cur;
  }

  void add_word(std::span<const Letter> w) {
    for (Letter l : w) extend(l.code());
    extend(sigma - 1);
  }

  /// For each prefix end j (1-based), the start of the longest suffix of
  /// w[0, j) occurring in the corpus.
  std::vector<std::size_t> match_starts(std::span<const Letter> w) const {
    std::vector<std::size_t> out(w.size() + 1, 0);
    int s = 0;
    std::size_t l = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const std::size_t c = w[j].code();
      while (s != 0 && go(s, c) == -1) {
        s = link[static_cast<std::size_t>(s)];
        l = static_cast<std::size_t>(len[static_cast<std::size_t>(s)]);
      }
      if (go(s, c) != -1) {
        s = go(s, c);
        ++l;
      } else {
        l = 0;
      }
      out[j + 1] = j + 1 - l;
    }
    return out;
  }
};

LegalityContext::LegalityContext(const GraphMap& f, LegalityOptions opts)
    : f_(f), opts_(opts), filt_(compute_filtration(f)), turns_(turn_analysis(f)), bcc_(bcc_bound(f)) {
  const auto ns = filt_.strata.size();
  critical_.assign(ns, 0.0);
  depth_.assign(ns, 0);
  corpus_.resize(ns);
  for (int r : filt_.eg_strata()) {
    const Stratum& s = filt_.strata[static_cast<std::size_t>(r)];
    critical_[static_cast<std::size_t>(r)] = critical_constant(s.pf.value, static_cast<double>(bcc_.bound));
    if (opts_.mode != LegMode::Leaf) continue;
    // deepest K within the corpus cap
    std::vector<EdgePath> words;
    for (int e : s.edges) words.push_back(EdgePath{f.domain().edge(e).from, {Letter(e, false)}});
    int k = 0;
    while (k < opts_.leaf_depth) {
      std::vector<EdgePath> deeper;
      std::size_t total = 0;
      for (const auto& w : words) {
        deeper.push_back(apply(f, w));
        total += 2 * deeper.back().size();
      }
      if (total > opts_.corpus_cap) break;
      words = std::move(deeper);
      ++k;
    }
    depth_[static_cast<std::size_t>(r)] = k;
    auto corpus = std::make_unique<Corpus>(static_cast<std::size_t>(f.domain().num_letters()) + 1);
    for (const auto& w : words) {
      corpus->add_word(w.letters);
      corpus->add_word(inverse_word(w.letters));
    }
    corpus_[static_cast<std::size_t>(r)] = std::move(corpus);
  }
}

LegalityContext::~LegalityContext() = default;
LegalityContext::LegalityContext(LegalityContext&&) noexcept = default;
LegalityContext& LegalityContext::operator=(LegalityContext&&) noexcept = default;

double LegalityContext::critical(int r) const {
  const double c = critical_.at(static_cast<std::size_t>(r));
  if (c == 0.0) throw Error(ErrorKind::NotEG, "stratum " + std::to_string(r) + " is not EG");
  return c;
}

int LegalityContext::leaf_depth(int r) const { return depth_.at(static_cast<std::size_t>(r)); }

LegResult LegalityContext::leg_r(std::span<const Letter> alpha, int r) const {
  const double c = critical(r);
  const std::size_t n = alpha.size();
  std::vector<std::size_t> weight(n + 1, 0);  // prefix counts of H_r letters
  for (std::size_t i = 0; i < n; ++i) {
    const int h = filt_.height(alpha[i]);
    if (h != r && filt_.strata[static_cast<std::size_t>(h)].cls != StratumClass::Zero)
      throw Error(ErrorKind::Precondition, "path leaves H_" + std::to_string(r) + " and the zero strata");
    weight[i + 1] = weight[i] + (h == r ? 1 : 0);
  }

  // lo[j]: smallest start i such that alpha[i, j) is an admissible piece
  std::vector<std::size_t> lo(n + 1, 0);
  if (opts_.mode == LegMode::Leaf) {
    lo = corpus_[static_cast<std::size_t>(r)]->match_starts(alpha);
  } else {
    std::size_t last_illegal = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      if (j >= 2) {
        const Letter x = alpha[j - 2].inverse(), y = alpha[j - 1];
        if (filt_.height(x) == r && filt_.height(y) == r && !turns_.is_legal(x, y)) last_illegal = j - 1;
      }
      lo[j] = last_illegal;
    }
  }

  // best[j] = max(best[j-1], max over i in [lo[j], hi[j]] of best[i] + w(i, j)),
  // where hi[j] is the largest start leaving weight >= c. Both window ends
  // are nondecreasing in j, so a monotone deque gives the window maximum.
  std::vector<std::int64_t> best(n + 1, 0);
  std::vector<std::size_t> choice(n + 1, n + 1);  // start of the segment ending at j, or n+1
  std::deque<std::size_t> window;
  std::size_t pushed = 0;  // starts 0..pushed-1 have been offered
  auto key = [&](std::size_t i) { return best[i] - static_cast<std::int64_t>(weight[i]); };
  for (std::size_t j = 1; j <= n; ++j) {
    best[j] = best[j - 1];
    while (pushed < j && static_cast<double>(weight[j] - weight[pushed]) >= c) {
      while (!window.empty() && key(window.back()) <= key(pushed)) window.pop_back();
      window.push_back(pushed);
      ++pushed;
    }
    while (!window.empty() && window.front() < lo[j]) window.pop_front();
    if (!window.empty()) {
      const std::size_t i = window.front();
      const std::int64_t cand = key(i) + static_cast<std::int64_t>(weight[j]);
      if (cand > best[j]) {
        best[j] = cand;
        choice[j] = i;
      }
    }
  }

  LegResult res;
  res.length = n;
  res.qualifying = static_cast<std::size_t>(best[n]);
  res.ratio = n == 0 ? 0.0 : static_cast<double>(res.qualifying) / static_cast<double>(n);
  for (std::size_t j = n; j > 0;) {
    if (choice[j] == n + 1) {
      --j;
      continue;
    }
    const std::size_t i = choice[j];
    res.segments.push_back({i, j, weight[j] - weight[i]});
    j = i;
  }
  std::reverse(res.segments.begin(), res.segments.end());
  return res;
}

LegResult LegalityContext::leg(std::span<const Letter> beta) const {
  LegResult total;
  total.length = beta.size();
  auto is_zero = [&](Letter l) { return filt_.strata[static_cast<std::size_t>(filt_.height(l))].cls == StratumClass::Zero; };
  for (int r : filt_.eg_strata()) {
    std::size_t i = 0;
    while (i < beta.size()) {
      if (filt_.height(beta[i]) != r) {
        ++i;
        continue;
      }
      // maximal run of H_r and zero letters, trimmed to end on H_r letters
      const std::size_t b = i;
      std::size_t e = i;
      while (e < beta.size() && (filt_.height(beta[e]) == r || is_zero(beta[e]))) ++e;
      std::size_t end = e;
      while (end > b && filt_.height(beta[end - 1]) != r) --end;
      const LegResult part = leg_r(beta.subspan(b, end - b), r);
      total.qualifying += part.qualifying;
      for (auto s : part.segments) total.segments.push_back({s.begin + b, s.end + b, s.weight});
      i = e;
    }
  }
  std::sort(total.segments.begin(), total.segments.end(),
            [](const LegSegment& x, const LegSegment& y) { return x.begin < y.begin; });
  total.ratio = beta.empty() ? 0.0 : static_cast<double>(total.qualifying) / static_cast<double>(beta.size());
  return total;
}

LegResult LegalityContext::leg(const Circuit& beta) const {
  const Word& w = beta.letters;
  const std::size_t n = w.size();
  if (n == 0) return {};
  // cut the cycle where a component or an illegal turn already breaks it
  auto key = [&](Letter l) {
    const int h = filt_.height(l);
    const auto cls = filt_.strata[static_cast<std::size_t>(h)].cls;
    if (cls == StratumClass::Zero) return -2;
    return cls == StratumClass::EG ? h : -1;
  };
  std::size_t cut = n;
  std::vector<int> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = key(w[i]);
  for (std::size_t i = 0; i < n && cut == n; ++i) {
    if (keys[i] == -2) continue;
    if (keys[i] == -1) {
      cut = i;
      break;
    }
    std::size_t p = (i + n - 1) % n;
    while (keys[p] == -2 && p != i) p = (p + n - 1) % n;
    if (keys[p] != keys[i]) cut = i;
  }
  if (cut == n) {
    for (std::size_t i = 0; i < n; ++i) {
      const Letter x = w[(i + n - 1) % n].inverse(), y = w[i];
      if (keys[i] >= 0 && filt_.height(x) == keys[i] && !turns_.is_legal(x, y)) {
        cut = i;
        break;
      }
    }
  }
  if (cut == n) cut = 0;
  Word rotated(w.begin() + static_cast<std::ptrdiff_t>(cut), w.end());
  rotated.insert(rotated.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cut));
  return leg(std::span<const Letter>(rotated));
}

LegalityGrowth legality_growth_test(const LegalityContext& ctx, const Circuit& beta, int n_max) {
  LegalityGrowth out;
  Circuit cur = cyclically_reduce(beta);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) cur = apply(ctx.map(), cur);
    const LegResult r = ctx.leg(cur);
    out.rows.push_back({n, cur.size(), r.ratio, r.qualifying, r.segments.size()});
  }
  int n0 = static_cast<int>(out.rows.size());
  while (n0 > 0 && out.rows[static_cast<std::size_t>(n0 - 1)].leg > 0) --n0;
  if (n0 < static_cast<int>(out.rows.size())) {
    out.n0 = n0;
    out.epsilon = 1.0;
    for (std::size_t i = static_cast<std::size_t>(n0); i < out.rows.size(); ++i)
      out.epsilon = std::min(out.epsilon, out.rows[i].leg);
  }
  return out;
}

GrowthResult growth_test(const GraphMap& f, const Circuit& beta, double factor, int n_max) {
  GrowthResult out;
  Circuit cur = cyclically_reduce(beta);
  const double target = factor * static_cast<double>(cur.size());
  auto ok = [&](std::size_t len) {
    const double l = static_cast<double>(len);
    return factor > 1.0 ? l > target : l >= target;
  };
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) cur = apply(f, cur);
    out.lengths.push_back(cur.size());
  }
  int n1 = static_cast<int>(out.lengths.size());
  while (n1 > 0 && ok(out.lengths[static_cast<std::size_t>(n1 - 1)])) --n1;
  if (n1 < static_cast<int>(out.lengths.size())) out.n1 = n1;
  return out;
}

}  // namespace fga
