#include "fga/cli.hpp"

#include <sstream>

#include "fga/io.hpp"
#include "fga/laminations.hpp"
#include "fga/regluing.hpp"

namespace fga {

using nlohmann::ordered_json;

namespace {

ordered_json header(const RunConfig& cfg, const Loader& loader, ordered_json config) {
  ordered_json h;
  h["tool"] = "fga";
  h["version"] = kToolVersion;
  h["command"] = cfg.command;
  ordered_json inputs = ordered_json::array();
  for (const auto& in : loader.inputs()) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  h["inputs"] = inputs;
  h["seed"] = cfg.seed;
  h["config"] = std::move(config);
  return h;
}

const std::string& single_input(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1)
    throw Error(ErrorKind::Precondition, cfg.command + " takes exactly one input file");
  return cfg.inputs.front();
}

void check_power(int power) {
  if (power < 1) throw Error(ErrorKind::Precondition, "power must be positive");
}

ordered_json graph_json(const MarkedGraph& g) {
  return {{"name", g.name()}, {"vertices", g.num_vertices()}, {"edges", g.num_edges()}, {"rank", g.rank()}};
}

}  // namespace

CommandResult cmd_analyze(const RunConfig& cfg) {
  check_power(cfg.power);
  Loader loader;
  const GraphMap base = loader.map(single_input(cfg));
  const GraphMap f = cfg.power == 1 ? base : power(base, cfg.power);
  const MarkedGraph& g = f.domain();
  ordered_json out = header(cfg, loader,
                            {{"power", cfg.power},
                             {"scan_len", cfg.scan_len},
                             {"scan_iter", cfg.scan_iter},
                             {"rtt_length", cfg.rtt_length}});
  out["map"] = base.name();
  out["graph"] = graph_json(g);

  const Pi1Report pi = pi1_check(f);
  out["pi1_isomorphism"] = pi.isomorphism;

  const Filtration filt = compute_filtration(f);
  const BccEstimate bcc = bcc_bound(f);
  ordered_json strata = ordered_json::array();
  for (std::size_t r = 0; r < filt.strata.size(); ++r) {
    const Stratum& s = filt.strata[r];
    ordered_json row{{"stratum", r}, {"class", to_string(s.cls)}};
    std::string names;
    for (int e : s.edges) names += (names.empty() ? "" : " ") + g.edge(e).name;
    row["edges"] = names;
    row["pf"] = s.cls == StratumClass::Zero ? 0.0 : s.pf.value;
    if (s.cls == StratumClass::EG) {
      row["pf_lower"] = s.pf.lower;
      row["pf_upper"] = s.pf.upper;
      row["critical_constant"] = critical_constant(s.pf.value, static_cast<double>(bcc.bound));
    }
    strata.push_back(row);
  }
  out["strata"] = strata;
  out["bcc_bound"] = bcc.bound;
  out["bcc_empirical"] = bcc.empirical;

  const TurnTable turns = turn_analysis(f);
  ordered_json fixed = ordered_json::array();
  for (Letter d : turns.fixed_directions) fixed.push_back(g.letter_name(d));
  out["fixed_directions"] = fixed;
  out["turns"] = turns.turns.size();
  out["illegal_turns"] = turns.illegal_count();
  ordered_json turn_rows = ordered_json::array();
  for (std::size_t i = 0; i < turns.turns.size(); ++i)
    turn_rows.push_back({{"turn", g.letter_name(turns.turns[i].first) + "," + g.letter_name(turns.turns[i].second)},
                         {"legal", static_cast<bool>(turns.legal[i])}});
  out["turn_table"] = turn_rows;

  RttOptions ro;
  ro.connecting_length = cfg.rtt_length;
  ro.seed = cfg.seed;
  const RttReport rtt = verify_rtt(f, filt, ro);
  ordered_json rtt_rows = ordered_json::array();
  for (const auto& c : rtt.strata)
    rtt_rows.push_back({{"stratum", c.stratum},
                        {"directions_preserved", c.directions_preserved},
                        {"images_legal", c.images_r_legal},
                        {"legal_turns_map_legal", c.legal_turns_map_legal},
                        {"connecting_paths_ok", c.connecting_paths_ok},
                        {"partial", c.connecting_partial},
                        {"connecting_tested", c.connecting_tested},
                        {"passed", c.passed()}});
  out["rtt"] = rtt_rows;
  out["rtt_passed"] = rtt.passed();

  const auto periodic = periodic_class_scan(f, cfg.scan_len, cfg.scan_iter);
  ordered_json per = ordered_json::array();
  for (const auto& p : periodic) per.push_back({{"circuit", g.format(p.circuit.letters)}, {"period", p.period}});
  out["periodic_classes"] = per;
  out["periodic_count"] = periodic.size();
  return {out, 0};
}

CommandResult cmd_legality(const RunConfig& cfg) {
  check_power(cfg.power);
  if (cfg.iters < 0) throw Error(ErrorKind::Precondition, "iteration count must be nonnegative");
  Loader loader;
  const GraphMap base = loader.map(single_input(cfg));
  const GraphMap f = cfg.power == 1 ? base : power(base, cfg.power);
  const MarkedGraph& g = f.domain();
  const Circuit beta{g.parse_word(cfg.circuit)};
  if (beta.letters.empty()) throw Error(ErrorKind::Precondition, "empty circuit");
  cyclically_reduce(g, beta);  // closedness
  if (!is_cyclically_reduced(beta.letters))
    throw Error(ErrorKind::Precondition, "circuit '" + cfg.circuit + "' is not cyclically reduced");

  ordered_json out = header(cfg, loader,
                            {{"power", cfg.power},
                             {"circuit", g.format(beta.letters)},
                             {"iters", cfg.iters},
                             {"mode", to_string(cfg.mode)},
                             {"factor", cfg.factor}});
  LegalityOptions lo;
  lo.mode = cfg.mode;
  const LegalityContext ctx(f, lo);
  ordered_json crit = ordered_json::array();
  for (int r : ctx.filtration().eg_strata())
    crit.push_back({{"stratum", r}, {"critical_constant", ctx.critical(r)}, {"leaf_depth", ctx.leaf_depth(r)}});
  out["eg_strata"] = crit;
  out["bcc_bound"] = ctx.bcc().bound;

  const LegalityGrowth lg = legality_growth_test(ctx, beta, cfg.iters);
  const GrowthResult gr = growth_test(f, beta, cfg.factor, cfg.iters);
  ordered_json rows = ordered_json::array();
  for (const auto& row : lg.rows)
    rows.push_back({{"n", row.n},
                    {"length", row.length},
                    {"leg", row.leg},
                    {"qualifying", row.qualifying},
                    {"segments", row.segments}});
  out["rows"] = rows;
  out["n0"] = lg.n0 ? ordered_json(*lg.n0) : ordered_json(nullptr);
  out["epsilon"] = lg.epsilon;
  out["n1"] = gr.n1 ? ordered_json(*gr.n1) : ordered_json(nullptr);
  return {out, 0};
}

namespace {

std::string coset_name(const MarkedGraph& rose, const Word& w) { return w.empty() ? "1" : rose.format(w); }

ordered_json independence_json(const IndependenceReport& rep, const std::vector<EndData>& ends, std::size_t i,
                               std::size_t j) {
  const MarkedGraph& rose = ends[i].cover.base();
  ordered_json p{{"end_i", rep.name_i},
                 {"end_j", rep.name_j},
                 {"depth", rep.depth},
                 {"doubled", rep.doubled},
                 {"rays_i", rep.rays_i.size()},
                 {"rays_j", rep.rays_j.size()},
                 {"cells", rep.cells.size()},
                 {"no_common_end", rep.count(EndVerdict::NoCommonEnd)},
                 {"asymptotic", rep.count(EndVerdict::Asymptotic)},
                 {"inconclusive", rep.inconclusive},
                 {"summary", to_string(rep.summary)}};
  if (rep.witness) {
    const IndependenceCell& c = rep.cells[*rep.witness];
    const auto& cos_i = c.side_i == 0 ? rep.cosets_i : rep.cosets_j;
    const auto& cos_j = c.side_j == 0 ? rep.cosets_i : rep.cosets_j;
    const auto& rays_i = c.side_i == 0 ? rep.rays_i : rep.rays_j;
    const auto& rays_j = c.side_j == 0 ? rep.rays_i : rep.rays_j;
    const auto& ray_i = rays_i[static_cast<std::size_t>(c.ray_i)];
    const auto& ray_j = rays_j[static_cast<std::size_t>(c.ray_j)];
    p["witness"] = {{"condition", c.condition},
                    {"coset_i", coset_name(rose, cos_i[static_cast<std::size_t>(c.coset_i)])},
                    {"coset_j", coset_name(rose, cos_j[static_cast<std::size_t>(c.coset_j)])},
                    {"ray_i", std::string(to_string(ray_i.role)) + " " +
                                  ends[c.side_i == 0 ? i : j].cover.total().letter_name(ray_i.seed)},
                    {"ray_j", std::string(to_string(ray_j.role)) + " " +
                                  ends[c.side_j == 0 ? i : j].cover.total().letter_name(ray_j.seed)},
                    {"window", c.test.window}};
  } else {
    p["witness"] = nullptr;
  }
  auto rays = [&](const std::vector<BoundaryRay>& rs, const EndData& e) {
    ordered_json a = ordered_json::array();
    for (const auto& r : rs)
      a.push_back({{"role", to_string(r.role)},
                   {"seed", e.cover.total().letter_name(r.seed)},
                   {"complete", r.complete},
                   {"prefix", rose.format(r.base)}});
    return a;
  };
  auto cosets = [&](const std::vector<Word>& cs) {
    ordered_json a = ordered_json::array();
    for (const auto& w : cs) a.push_back(coset_name(rose, w));
    return a;
  };
  p["coset_list_i"] = cosets(rep.cosets_i);
  p["coset_list_j"] = cosets(rep.cosets_j);
  p["ray_list_i"] = rays(rep.rays_i, ends[i]);
  p["ray_list_j"] = rays(rep.rays_j, ends[j]);
  ordered_json cells = ordered_json::array();
  for (const auto& c : rep.cells)
    cells.push_back({{"condition", c.condition},
                     {"side_i", c.side_i},
                     {"side_j", c.side_j},
                     {"coset_i", c.coset_i},
                     {"coset_j", c.coset_j},
                     {"ray_i", c.ray_i},
                     {"ray_j", c.ray_j},
                     {"verdict", to_string(c.test.verdict)},
                     {"offset_i", c.test.offset1},
                     {"offset_j", c.test.offset2},
                     {"window", c.test.window}});
  p["cell_list"] = cells;
  return p;
}

ordered_json validation_json(const SystemReport& rep) {
  ordered_json a = ordered_json::array();
  for (const auto& e : rep.edges)
    a.push_back({{"edge", e.edge},
                 {"degree_u", e.degree_u},
                 {"degree_v", e.degree_v},
                 {"space_rank", e.space_rank},
                 {"exact_inverse", e.exact_inverse}});
  return a;
}

}  // namespace

CommandResult cmd_independence(const RunConfig& cfg) {
  check_power(cfg.power);
  Loader loader;
  LoadedSystem sys = loader.system(single_input(cfg));
  sys.spec.power = cfg.power;
  const SystemReport val = validate_system(sys.graph, sys.spec);
  ordered_json out =
      header(cfg, loader, {{"power", cfg.power}, {"depth", cfg.depth}, {"auto_double", cfg.auto_double}});
  out["system"] = sys.graph.name;
  out["edges"] = validation_json(val);
  ordered_json vertices = ordered_json::array();
  IndependenceSummary overall = IndependenceSummary::Independent;
  for (std::size_t v = 0; v < sys.graph.vertices.size(); ++v) {
    const auto ends = vertex_ends(sys.graph, sys.spec, static_cast<int>(v));
    ordered_json vj{{"vertex", sys.graph.vertices[v].name}, {"ends", ends.size()}};
    if (ends.size() < 2) {
      vj["summary"] = "no-pairs";
      vj["pairs"] = ordered_json::array();
      vertices.push_back(vj);
      continue;
    }
    const FamilyReport fam = family_independence(ends, cfg.depth, cfg.auto_double);
    ordered_json pairs = ordered_json::array();
    std::size_t k = 0;
    for (std::size_t i = 0; i < ends.size(); ++i)
      for (std::size_t j = i + 1; j < ends.size(); ++j) pairs.push_back(independence_json(fam.pairs[k++], ends, i, j));
    vj["summary"] = to_string(fam.summary);
    vj["pairs"] = pairs;
    vertices.push_back(vj);
    if (fam.summary == IndependenceSummary::Dependent) overall = fam.summary;
    if (fam.summary == IndependenceSummary::Inconclusive && overall == IndependenceSummary::Independent)
      overall = fam.summary;
  }
  out["vertices"] = vertices;
  out["summary"] = to_string(overall);
  return {out, 0};
}

CommandResult cmd_stretch(const RunConfig& cfg) {
  check_power(cfg.power);
  Loader loader;
  LoadedSystem sys = loader.system(single_input(cfg));
  sys.spec.power = cfg.power;
  validate_system(sys.graph, sys.spec);
  if (cfg.vertex.empty()) throw Error(ErrorKind::Precondition, "stretch needs --vertex");
  const int v = sys.graph.vertex_index(cfg.vertex);
  StretchConfig sc;
  sc.samples = cfg.samples;
  sc.lengths = cfg.lengths;
  sc.m_max = cfg.m_max;
  sc.seed = cfg.seed;
  if (sc.m_max < 1) throw Error(ErrorKind::Precondition, "m range must be positive");
  for (auto l : sc.lengths)
    if (l == 0) throw Error(ErrorKind::Precondition, "word lengths must be positive");
  const HallwayEngine engine(sys.graph, sys.spec);
  const StretchSurvey sv = stretch_survey(engine, v, sc);
  ordered_json out = header(cfg, loader,
                            {{"power", cfg.power},
                             {"vertex", cfg.vertex},
                             {"samples", sc.samples},
                             {"lengths", sc.lengths},
                             {"m_max", sc.m_max},
                             {"threshold", sc.threshold}});
  out["system"] = sys.graph.name;
  const MarkedGraph& rose = sys.graph.vertices[static_cast<std::size_t>(v)].rose;
  ordered_json rows = ordered_json::array();
  for (const auto& r : sv.rows)
    rows.push_back({{"length", r.length}, {"m", r.m}, {"samples", r.samples}, {"passed", r.passed},
                    {"fraction", r.fraction()}});
  out["rows"] = rows;
  out["l_estimate"] = sv.l_estimate ? ordered_json(*sv.l_estimate) : ordered_json(nullptr);
  out["m_estimate"] = sv.m_estimate ? ordered_json(*sv.m_estimate) : ordered_json(nullptr);
  out["failure_count"] = sv.failure_count;
  ordered_json fails = ordered_json::array();
  for (const auto& f : sv.failures)
    fails.push_back({{"length", f.length}, {"m", f.m}, {"sample", f.sample}, {"tau", rose.format(f.tau)},
                     {"lengths", f.lengths}});
  out["failures"] = fails;
  return {out, 0};
}

CommandResult cmd_flare(const RunConfig& cfg) {
  check_power(cfg.power);
  Loader loader;
  LoadedSystem sys = loader.system(single_input(cfg));
  sys.spec.power = cfg.power;
  const SystemReport val = validate_system(sys.graph, sys.spec);
  FlareConfig fc;
  fc.candidates = cfg.candidates;
  fc.samples = cfg.samples;
  fc.m_max = cfg.m_max;
  fc.lambda = cfg.lambda;
  fc.girth = cfg.girth;
  fc.seed = cfg.seed;
  fc.word_min = cfg.word_min;
  fc.word_max = cfg.word_max;
  if (fc.m_max < 1) throw Error(ErrorKind::Precondition, "m range must be positive");
  if (fc.candidates.empty()) throw Error(ErrorKind::Precondition, "no candidate exponents");
  ordered_json out = header(cfg, loader,
                            {{"power", cfg.power},
                             {"candidates", fc.candidates},
                             {"samples", fc.samples},
                             {"m_max", fc.m_max},
                             {"lambda", fc.lambda},
                             {"girth", fc.girth},
                             {"word_min", fc.word_min},
                             {"word_max", fc.word_max},
                             {"short_m", fc.short_m},
                             {"threshold", fc.threshold}});
  out["system"] = sys.graph.name;
  out["edges"] = validation_json(val);
  if (fc.samples == 0) {
    out["reports"] = ordered_json::array();
    out["smallest"] = nullptr;
    out["monotone"] = nullptr;
    return {out, 1};
  }
  const ExponentSearch es = exponent_search(sys.graph, sys.spec, fc);
  ordered_json reports = ordered_json::array();
  bool monotone = true;
  for (std::size_t k = 0; k < es.reports.size(); ++k) {
    const FlareReport& r = es.reports[k];
    if (k > 0 && r.pass_fraction < es.reports[k - 1].pass_fraction) monotone = false;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"m", row.m}, {"passed", row.passed}, {"failed", row.failed},
                      {"below_girth", row.below_girth}, {"fraction", row.fraction()}});
    ordered_json wit = ordered_json::array();
    for (const auto& w : r.witnesses) {
      ordered_json deps = ordered_json::array();
      for (const auto& side : w.departures) {
        ordered_json s = ordered_json::array();
        for (const auto& d : side)
          s.push_back(sys.graph.edges[static_cast<std::size_t>(d.edge)].name + (d.v_end ? ":v:" : ":u:") +
                      std::to_string(d.fiber));
        deps.push_back(s);
      }
      wit.push_back({{"m", w.m}, {"sample", w.sample}, {"center", w.center}, {"profile", w.profile},
                     {"departures", deps}});
    }
    reports.push_back({{"n", r.n},
                       {"pass_fraction", r.pass_fraction},
                       {"n0", r.n0 ? ordered_json(*r.n0) : ordered_json(nullptr)},
                       {"c0", r.c0},
                       {"meets", r.meets},
                       {"rows", rows},
                       {"witness_count", r.witnesses.size()},
                       {"witnesses", wit}});
  }
  out["reports"] = reports;
  out["smallest"] = es.smallest ? ordered_json(*es.smallest) : ordered_json(nullptr);
  out["monotone"] = monotone;
  return {out, es.smallest ? 0 : 1};
}

CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "analyze") return cmd_analyze(cfg);
  if (cfg.command == "legality") return cmd_legality(cfg);
  if (cfg.command == "independence") return cmd_independence(cfg);
  if (cfg.command == "stretch") return cmd_stretch(cfg);
  if (cfg.command == "flare") return cmd_flare(cfg);
  throw Error(ErrorKind::Precondition, "unknown command '" + cfg.command + "'");
}

namespace {

// Fields carried only by the JSON form.
bool json_only(const std::string& key) {
  return key == "witnesses" || key == "cell_list" || key == "coset_list_i" || key == "coset_list_j" || key == "ray_list_i" || key == "ray_list_j" ||
         key == "turn_table" || key == "failures";
}

std::string scalar(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_table(const ordered_json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v)
    if (!e.is_object()) return false;
  return true;
}

void render_text(const ordered_json& obj, const std::string& prefix, std::ostringstream& out) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (json_only(it.key())) continue;
    const std::string key = prefix + it.key();
    const ordered_json& v = it.value();
    if (is_table(v)) {
      out << "[" << key << "]\n";
      for (const auto& row : v) {
        bool first = true;
        std::vector<std::pair<std::string, const ordered_json*>> nested;
        for (auto c = row.begin(); c != row.end(); ++c) {
          if (json_only(c.key())) continue;
          if (is_table(c.value()) || c.value().is_object()) {
            nested.emplace_back(c.key(), &c.value());
            continue;
          }
          out << (first ? "" : " ") << c.key() << "=" << scalar(c.value());
          first = false;
        }
        out << "\n";
        for (const auto& [k, n] : nested) {
          if (n->is_object()) {
            render_text(*n, key + "." + k + ".", out);
          } else {
            ordered_json wrap;
            wrap[k] = *n;
            render_text(wrap, key + ".", out);
          }
        }
      }
    } else if (v.is_object()) {
      render_text(v, key + ".", out);
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
      out << key << "=" << joined << "\n";
    } else {
      out << key << "=" << scalar(v) << "\n";
    }
  }
}

}  // namespace

std::string render(const ordered_json& report, OutputMode mode) {
  if (mode == OutputMode::Json) return report.dump(2) + "\n";
  std::ostringstream out;
  render_text(report, "", out);
  return out.str();
}

}  // namespace fga
