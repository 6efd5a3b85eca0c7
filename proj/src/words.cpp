#include "fga/words.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <sstream>

namespace fga {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Structural: return "Structural";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::InfiniteIndex: return "InfiniteIndex";
    case ErrorKind::NotACovering: return "NotACovering";
    case ErrorKind::InverseMismatch: return "InverseMismatch";
    case ErrorKind::NotEG: return "NotEG";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::DirectionNotFixed: return "DirectionNotFixed";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

MarkedGraph MarkedGraph::rose(const std::vector<std::string>& petals, std::string name) {
  MarkedGraph g(std::move(name));
  g.add_vertex("0");
  for (const auto& p : petals) g.add_edge(p, 0, 0);
  return g;
}

int MarkedGraph::add_vertex(const std::string& name) {
  if (vertex_lookup_.count(name) != 0) throw Error(ErrorKind::Structural, "duplicate vertex '" + name + "'");
  const int id = num_vertices();
  vertex_names_.push_back(name);
  vertex_lookup_[name] = id;
  out_.emplace_back();
  return id;
}

int MarkedGraph::add_edge(const std::string& name, int from, int to) {
  if (from < 0 || to < 0 || from >= num_vertices() || to >= num_vertices())
    throw Error(ErrorKind::Structural, "edge '" + name + "' has an undeclared endpoint");
  if (edge_lookup_.count(name) != 0) throw Error(ErrorKind::Structural, "duplicate edge '" + name + "'");
  if (name.empty() || name.back() == '\'') throw Error(ErrorKind::Structural, "bad edge name '" + name + "'");
  const int id = num_edges();
  edges_.push_back({name, from, to});
  edge_lookup_[name] = id;
  auto insert_sorted = [](std::vector<Letter>& v, Letter l) { v.insert(std::upper_bound(v.begin(), v.end(), l), l); };
  insert_sorted(out_[static_cast<std::size_t>(from)], Letter(id, false));
  insert_sorted(out_[static_cast<std::size_t>(to)], Letter(id, true));
  return id;
}

bool MarkedGraph::is_connected() const {
  if (num_vertices() == 0) return true;
  std::vector<bool> seen(static_cast<std::size_t>(num_vertices()), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (Letter l : directions_at(v)) {
      const int w = terminus(l);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == num_vertices();
}

void MarkedGraph::check_core() const {
  for (int v = 0; v < num_vertices(); ++v)
    if (valence(v) == 1) throw Error(ErrorKind::Structural, "vertex '" + vertex_name(v) + "' has valence 1");
}

int MarkedGraph::vertex_index(const std::string& name) const {
  auto it = vertex_lookup_.find(name);
  if (it == vertex_lookup_.end()) throw Error(ErrorKind::Structural, "unknown vertex '" + name + "'");
  return it->second;
}

int MarkedGraph::edge_index(const std::string& name) const {
  auto it = edge_lookup_.find(name);
  if (it == edge_lookup_.end()) throw Error(ErrorKind::Structural, "unknown edge '" + name + "'");
  return it->second;
}

namespace {

bool all_lower(const std::string& s) {
  bool has_alpha = false;
  for (char c : s) {
    if (std::isupper(static_cast<unsigned char>(c))) return false;
    if (std::isalpha(static_cast<unsigned char>(c))) has_alpha = true;
  }
  return has_alpha;
}

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string to_upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Letter MarkedGraph::parse_letter(const std::string& token) const {
  if (!token.empty() && token.back() == '\'') {
    return Letter(edge_index(token.substr(0, token.size() - 1)), true);
  }
  if (auto it = edge_lookup_.find(token); it != edge_lookup_.end()) return Letter(it->second, false);
  const std::string lower = to_lower(token);
  if (lower != token && to_upper(token) == token) {
    if (auto it = edge_lookup_.find(lower); it != edge_lookup_.end() && all_lower(lower))
      return Letter(it->second, true);
  }
  throw Error(ErrorKind::Structural, "unknown letter '" + token + "'");
}

std::string MarkedGraph::letter_name(Letter l) const {
  const std::string& n = edge(l.edge()).name;
  if (!l.inverted()) return n;
  if (all_lower(n)) return to_upper(n);
  return n + "'";
}

std::string MarkedGraph::format(std::span<const Letter> word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i != 0) out += ' ';
    out += letter_name(word[i]);
  }
  return out;
}

Word MarkedGraph::parse_word(const std::string& text) const {
  std::istringstream in(text);
  Word w;
  std::string tok;
  while (in >> tok) {
    if (tok == "1" || tok == "e") continue;
    w.push_back(parse_letter(tok));
  }
  return w;
}

bool operator==(const MarkedGraph& a, const MarkedGraph& b) {
  if (a.vertex_names_ != b.vertex_names_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.name != y.name || x.from != y.from || x.to != y.to) return false;
  }
  return true;
}

bool is_reduced(std::span<const Letter> word) {
  for (std::size_t i = 1; i < word.size(); ++i)
    if (word[i] == word[i - 1].inverse()) return false;
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> word) {
  if (!is_reduced(word)) return false;
  return word.size() < 2 || word.front() != word.back().inverse();
}

Word free_reduce(std::span<const Letter> word) {
  Word out;
  out.reserve(word.size());
  for (Letter l : word) {
    if (!out.empty() && out.back() == l.inverse()) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word inverse_word(std::span<const Letter> word) {
  Word out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(it->inverse());
  return out;
}

void check_path(const MarkedGraph& g, const EdgePath& p) {
  if (p.start < 0 || p.start >= g.num_vertices()) throw Error(ErrorKind::Structural, "path start is not a vertex");
  int at = p.start;
  for (std::size_t i = 0; i < p.letters.size(); ++i) {
    const Letter l = p.letters[i];
    if (l.edge() >= g.num_edges()) throw Error(ErrorKind::Structural, "letter outside graph");
    if (g.origin(l) != at)
      throw Error(ErrorKind::Structural, "letter " + std::to_string(i) + " (" + g.letter_name(l) +
                                             ") does not start at vertex '" + g.vertex_name(at) + "'");
    at = g.terminus(l);
  }
}

int terminal_vertex(const MarkedGraph& g, const EdgePath& p) {
  return p.letters.empty() ? p.start : g.terminus(p.letters.back());
}

EdgePath tighten(const MarkedGraph& g, const EdgePath& p) {
  check_path(g, p);
  return {p.start, free_reduce(p.letters)};
}

EdgePath concat_tighten(const MarkedGraph& g, const EdgePath& p, const EdgePath& q) {
  check_path(g, p);
  check_path(g, q);
  if (terminal_vertex(g, p) != q.start) throw Error(ErrorKind::EndpointMismatch, "concatenated paths do not meet");
  Word w = free_reduce(p.letters);
  for (Letter l : q.letters) {
    if (!w.empty() && w.back() == l.inverse()) {
      w.pop_back();
    } else {
      w.push_back(l);
    }
  }
  return {p.start, std::move(w)};
}

EdgePath reverse_path(const MarkedGraph& g, const EdgePath& p) {
  return {terminal_vertex(g, p), inverse_word(p.letters)};
}

std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n < 2) return 0;
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = s[(i + k) % n];
    const Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

Circuit cyclically_reduce(const Circuit& c) {
  Word w = free_reduce(c.letters);
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  Word core(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
  const std::size_t r = least_rotation(core);
  std::rotate(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(r), core.end());
  return {std::move(core)};
}

Circuit cyclically_reduce(const MarkedGraph& g, const Circuit& c) {
  if (!c.letters.empty()) {
    EdgePath p{g.origin(c.letters.front()), c.letters};
    check_path(g, p);
    if (terminal_vertex(g, p) != p.start) throw Error(ErrorKind::Structural, "circuit is not closed");
  }
  return cyclically_reduce(c);
}

}  // namespace fga
