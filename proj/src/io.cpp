#include "fga/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fga {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tok;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{n, {}};
    std::string t;
    while (words >> t) line.tok.push_back(t);
    if (!line.tok.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg,
                       ErrorKind kind = ErrorKind::Parse) {
  throw Error(kind, source + ":" + std::to_string(line) + ": " + msg);
}

std::string bare_message(const Error& e) {
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  std::string w = e.what();
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

// Runs `body`, re-raising library errors with the source location.
template <class F>
auto located(const std::string& source, int line, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    fail(source, line, bare_message(e), e.kind() == ErrorKind::Structural ? ErrorKind::Parse : e.kind());
  }
}

void expect_arity(const std::string& source, const Line& l, std::size_t n) {
  if (l.tok.size() != n)
    fail(source, l.number, "'" + l.tok[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
}

bool is_graph_keyword(const std::string& t) { return t == "graph" || t == "vertex" || t == "edge"; }

MarkedGraph graph_from_lines(const std::vector<Line>& lines, const std::string& source) {
  std::optional<MarkedGraph> g;
  for (const Line& l : lines) {
    const std::string& k = l.tok[0];
    if (k == "graph") {
      expect_arity(source, l, 2);
      if (g) fail(source, l.number, "second 'graph' declaration");
      g.emplace(l.tok[1]);
    } else if (!g) {
      fail(source, l.number, "expected 'graph <name>' first");
    } else if (k == "vertex") {
      expect_arity(source, l, 2);
      located(source, l.number, [&] { return g->add_vertex(l.tok[1]); });
    } else if (k == "edge") {
      expect_arity(source, l, 4);
      located(source, l.number,
              [&] { return g->add_edge(l.tok[1], g->vertex_index(l.tok[2]), g->vertex_index(l.tok[3])); });
    } else {
      fail(source, l.number, "unknown declaration '" + k + "'");
    }
  }
  if (!g) fail(source, 0, "no graph declaration");
  if (g->num_vertices() == 0) fail(source, 0, "graph has no vertices");
  return *g;
}

struct MapHeader {
  std::string name;
  std::string graph;
  int line = 0;
};

std::optional<MapHeader> find_map_header(const std::vector<Line>& lines, const std::string& source) {
  for (const Line& l : lines)
    if (l.tok[0] == "map") {
      if (l.tok.size() != 4 || l.tok[2] != "on") fail(source, l.number, "expected 'map <name> on <graph>'");
      return MapHeader{l.tok[1], l.tok[3], l.number};
    }
  return std::nullopt;
}

}  // namespace

MarkedGraph parse_graph(std::string_view text, const std::string& source) {
  return graph_from_lines(tokenize(text), source);
}

CoverMap parse_cover(std::string_view text, const MarkedGraph& base, const std::string& source,
                     const MarkedGraph* total) {
  const auto lines = tokenize(text);
  std::optional<MarkedGraph> g;
  std::vector<Letter> labels;
  std::optional<std::string> basepoint;
  int last = 0;
  for (const Line& l : lines) {
    const std::string& k = l.tok[0];
    last = l.number;
    if (k == "cover") {
      if (l.tok.size() != 4 || l.tok[2] != "over") fail(source, l.number, "expected 'cover <name> over <rose>'");
      if (g) fail(source, l.number, "second 'cover' declaration");
      if (l.tok[3] != base.name())
        fail(source, l.number, "cover is over '" + l.tok[3] + "' but the base rose is '" + base.name() + "'");
      g.emplace(l.tok[1]);
    } else if (!g) {
      fail(source, l.number, "expected 'cover <name> over <rose>' first");
    } else if (k == "cvertex") {
      expect_arity(source, l, 2);
      located(source, l.number, [&] { return g->add_vertex(l.tok[1]); });
    } else if (k == "cedge") {
      if (l.tok.size() != 6 || l.tok[4] != "label")
        fail(source, l.number, "expected 'cedge <id> <from> <to> label <base-edge>'");
      located(source, l.number, [&] {
        labels.push_back(base.parse_letter(l.tok[5]));
        return g->add_edge(l.tok[1], g->vertex_index(l.tok[2]), g->vertex_index(l.tok[3]));
      });
    } else if (k == "basepoint") {
      expect_arity(source, l, 2);
      basepoint = l.tok[1];
    } else {
      fail(source, l.number, "unknown declaration '" + k + "'");
    }
  }
  if (!g) fail(source, 0, "no cover declaration");
  if (g->num_vertices() == 0) fail(source, last, "cover has no vertices");
  const int bp = basepoint ? located(source, last, [&] { return g->vertex_index(*basepoint); }) : 0;
  if (total && !(*total == *g))
    throw Error(ErrorKind::NotACovering,
                source + ": cover graph differs from the edge space '" + total->name() + "'");
  try {
    return CoverMap(*g, base, labels, bp);
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + bare_message(e));
  }
}

GraphMap parse_map(std::string_view text, const std::string& source, const MarkedGraph* graph) {
  const auto lines = tokenize(text);
  const auto header = find_map_header(lines, source);
  if (!header) fail(source, 0, "no 'map <name> on <graph>' declaration");

  std::vector<Line> graph_lines;
  std::vector<Line> rules;
  for (const Line& l : lines) {
    if (is_graph_keyword(l.tok[0])) {
      if (l.number > header->line) fail(source, l.number, "graph declarations must precede the map");
      graph_lines.push_back(l);
    } else if (l.tok[0] == "map") {
      if (l.number != header->line) fail(source, l.number, "second 'map' declaration");
    } else {
      if (l.tok.size() < 2 || l.tok[1] != "->") fail(source, l.number, "expected '<edge> -> <letters>'");
      if (l.number < header->line) fail(source, l.number, "edge image before the map declaration");
      rules.push_back(l);
    }
  }

  MarkedGraph g;
  if (graph) {
    if (!graph_lines.empty()) fail(source, graph_lines[0].number, "inline graph given together with a domain");
    g = *graph;
  } else if (!graph_lines.empty()) {
    g = graph_from_lines(graph_lines, source);
  } else {
    std::vector<std::string> petals;
    std::set<std::string> seen;
    for (const Line& l : rules)
      if (seen.insert(l.tok[0]).second) petals.push_back(l.tok[0]);
    g = MarkedGraph::rose(petals, header->graph);
  }
  if (g.name() != header->graph)
    fail(source, header->line, "map is on '" + header->graph + "' but the domain is '" + g.name() + "'");

  std::vector<std::optional<Word>> images(static_cast<std::size_t>(g.num_edges()));
  std::vector<int> vimage(static_cast<std::size_t>(g.num_vertices()), -1);
  auto set_vertex = [&](int line, int v, int w) {
    int& slot = vimage[static_cast<std::size_t>(v)];
    if (slot != -1 && slot != w)
      fail(source, line, "vertex '" + g.vertex_name(v) + "' sent to both '" + g.vertex_name(slot) + "' and '" +
                             g.vertex_name(w) + "'");
    slot = w;
  };
  for (const Line& l : rules) {
    const int e = located(source, l.number, [&] { return g.edge_index(l.tok[0]); });
    if (images[static_cast<std::size_t>(e)]) fail(source, l.number, "edge '" + l.tok[0] + "' mapped twice");
    Word w;
    for (std::size_t i = 2; i < l.tok.size(); ++i)
      w.push_back(located(source, l.number, [&] { return g.parse_letter(l.tok[i]); }));
    if (w.empty()) fail(source, l.number, "empty image for edge '" + l.tok[0] + "'");
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (g.terminus(w[i]) != g.origin(w[i + 1]))
        fail(source, l.number, "image of '" + l.tok[0] + "' is not an edge path at letter " + std::to_string(i + 2));
      if (w[i + 1] == w[i].inverse())
        fail(source, l.number, "image of '" + l.tok[0] + "' is not reduced at letter " + std::to_string(i + 2));
    }
    set_vertex(l.number, g.edge(e).from, g.origin(w.front()));
    set_vertex(l.number, g.edge(e).to, g.terminus(w.back()));
    images[static_cast<std::size_t>(e)] = std::move(w);
  }
  std::vector<Word> edge_images;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!images[static_cast<std::size_t>(e)]) fail(source, header->line, "no image for edge '" + g.edge(e).name + "'");
    edge_images.push_back(*images[static_cast<std::size_t>(e)]);
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (vimage[static_cast<std::size_t>(v)] == -1)
      fail(source, header->line, "image of isolated vertex '" + g.vertex_name(v) + "' is undetermined");
  return located(source, header->line, [&] { return GraphMap(g, g, vimage, edge_images, header->name); });
}

std::string format_graph(const MarkedGraph& g) {
  std::ostringstream out;
  out << "graph " << g.name() << '\n';
  for (int v = 0; v < g.num_vertices(); ++v) out << "vertex " << g.vertex_name(v) << '\n';
  for (int e = 0; e < g.num_edges(); ++e)
    out << "edge " << g.edge(e).name << ' ' << g.vertex_name(g.edge(e).from) << ' ' << g.vertex_name(g.edge(e).to)
        << '\n';
  return out.str();
}

std::string format_cover(const CoverMap& c, const std::string& name) {
  const MarkedGraph& g = c.total();
  std::ostringstream out;
  out << "cover " << name << " over " << c.base().name() << '\n';
  for (int v = 0; v < g.num_vertices(); ++v) out << "cvertex " << g.vertex_name(v) << '\n';
  for (int e = 0; e < g.num_edges(); ++e) {
    const Letter lab = c.label(Letter(e, false));
    out << "cedge " << g.edge(e).name << ' ' << g.vertex_name(g.edge(e).from) << ' '
        << g.vertex_name(g.edge(e).to) << " label " << c.base().edge(lab.edge()).name << (lab.inverted() ? "'" : "")
        << '\n';
  }
  out << "basepoint " << g.vertex_name(c.basepoint()) << '\n';
  return out.str();
}

std::string format_map(const GraphMap& f) {
  const MarkedGraph& g = f.domain();
  std::ostringstream out;
  out << "map " << (f.name().empty() ? "f" : f.name()) << " on " << g.name() << '\n';
  for (int e = 0; e < g.num_edges(); ++e) out << g.edge(e).name << " -> " << g.format(f.image(Letter(e, false))) << '\n';
  return out.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Precondition, "sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

std::string Loader::read(const std::filesystem::path& path) {
  const std::string key = path.lexically_normal().string();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, key + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  inputs_.push_back({key, sha256_hex(ss.str())});
  return cache_[key] = ss.str();
}

MarkedGraph Loader::graph(const std::filesystem::path& path) {
  return parse_graph(read(path), path.lexically_normal().string());
}

CoverMap Loader::cover(const std::filesystem::path& path, const MarkedGraph& base, const MarkedGraph* total) {
  return parse_cover(read(path), base, path.lexically_normal().string(), total);
}

GraphMap Loader::map(const std::filesystem::path& path, const MarkedGraph* graph) {
  const std::string text = read(path);
  const std::string source = path.lexically_normal().string();
  if (!graph) {
    const auto lines = tokenize(text);
    bool inline_graph = false;
    for (const Line& l : lines) inline_graph = inline_graph || is_graph_keyword(l.tok[0]);
    const auto header = find_map_header(lines, source);
    if (!inline_graph && header) {
      const auto sibling = path.parent_path() / (header->graph + ".graph");
      if (std::filesystem::exists(sibling)) {
        const MarkedGraph g = this->graph(sibling);
        return parse_map(text, source, &g);
      }
    }
  }
  return parse_map(text, source, graph);
}

LoadedSystem Loader::system(const std::filesystem::path& path) {
  const std::string source = path.lexically_normal().string();
  const auto dir = path.parent_path();
  const auto lines = tokenize(read(path));
  LoadedSystem out;
  bool named = false;
  for (const Line& l : lines) {
    const std::string& k = l.tok[0];
    if (k == "system") {
      expect_arity(source, l, 2);
      if (named) fail(source, l.number, "second 'system' declaration");
      out.graph.name = l.tok[1];
      named = true;
    } else if (!named) {
      fail(source, l.number, "expected 'system <name>' first");
    } else if (k == "bvertex") {
      if (l.tok.size() != 4 || l.tok[2] != "rose") fail(source, l.number, "expected 'bvertex <id> rose <graphfile>'");
      for (const auto& v : out.graph.vertices)
        if (v.name == l.tok[1]) fail(source, l.number, "duplicate base vertex '" + l.tok[1] + "'");
      MarkedGraph rose = graph(dir / l.tok[3]);
      if (!rose.is_rose()) fail(source, l.number, "vertex space '" + rose.name() + "' is not a rose");
      out.graph.vertices.push_back({l.tok[1], std::move(rose)});
    } else if (k == "bedge") {
      if (l.tok.size() < 4) fail(source, l.number, "expected 'bedge <id> <u> <v> ...'");
      std::map<std::string, std::string> opt;
      for (std::size_t i = 4; i < l.tok.size(); i += 2) {
        if (i + 1 >= l.tok.size()) fail(source, l.number, "missing value for '" + l.tok[i] + "'");
        static const std::set<std::string> keys{"espace", "attach_u", "attach_v", "phi", "phi_inv", "exponent"};
        if (!keys.count(l.tok[i])) fail(source, l.number, "unknown key '" + l.tok[i] + "'");
        if (!opt.emplace(l.tok[i], l.tok[i + 1]).second) fail(source, l.number, "repeated key '" + l.tok[i] + "'");
      }
      for (const char* key : {"espace", "attach_u", "attach_v", "phi", "phi_inv"})
        if (!opt.count(key)) fail(source, l.number, std::string("missing '") + key + "'");
      for (const auto& e : out.graph.edges)
        if (e.name == l.tok[1]) fail(source, l.number, "duplicate base edge '" + l.tok[1] + "'");
      BaseEdge e;
      e.name = l.tok[1];
      e.u = located(source, l.number, [&] { return out.graph.vertex_index(l.tok[2]); });
      e.v = located(source, l.number, [&] { return out.graph.vertex_index(l.tok[3]); });
      e.space = graph(dir / opt["espace"]);
      e.attach_u = cover(dir / opt["attach_u"], out.graph.vertices[static_cast<std::size_t>(e.u)].rose, &e.space);
      e.attach_v = cover(dir / opt["attach_v"], out.graph.vertices[static_cast<std::size_t>(e.v)].rose, &e.space);
      EdgeAutomorphism a;
      a.phi = map(dir / opt["phi"], &e.space);
      a.phi_inv = map(dir / opt["phi_inv"], &e.space);
      if (opt.count("exponent")) {
        try {
          std::size_t used = 0;
          a.exponent = std::stoi(opt["exponent"], &used);
          if (used != opt["exponent"].size() || a.exponent < 1) throw std::invalid_argument("range");
        } catch (const std::exception&) {
          fail(source, l.number, "exponent must be a positive integer");
        }
      }
      out.graph.edges.push_back(std::move(e));
      out.spec.edges.push_back(std::move(a));
    } else {
      fail(source, l.number, "unknown declaration '" + k + "'");
    }
  }
  if (!named) fail(source, 0, "no system declaration");
  if (out.graph.vertices.empty()) fail(source, 0, "system has no base vertices");
  return out;
}

}  // namespace fga
