#pragma once

// Text formats for graphs, covers, maps and graph-of-roses systems.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fga/cover.hpp"
#include "fga/graph_map.hpp"
#include "fga/regluing.hpp"

namespace fga {

/// Parse errors carry "source:line: " in front of the message.
MarkedGraph parse_graph(std::string_view text, const std::string& source = "<graph>");

/// `total` is checked against the parsed cover graph when given.
CoverMap parse_cover(std::string_view text, const MarkedGraph& base, const std::string& source = "<cover>",
                     const MarkedGraph* total = nullptr);

/// Domain graph: `graph` when given, else a graph block inside the text,
/// else a rose on the left-hand letters in order of appearance. Vertex
/// images are read off the edge images.
GraphMap parse_map(std::string_view text, const std::string& source = "<map>",
                   const MarkedGraph* graph = nullptr);

/// Writers producing text the parsers read back.
std::string format_graph(const MarkedGraph& g);
std::string format_cover(const CoverMap& c, const std::string& name);
std::string format_map(const GraphMap& f);

struct InputDigest {
  std::string path;
  std::string sha256;
};

std::string sha256_hex(std::string_view data);

struct LoadedSystem {
  GraphOfRoses graph;
  RegluingSpec spec;
};

/// Reads files relative to each other and records a digest of every file
/// read, in reading order.
class Loader {
 public:
  std::string read(const std::filesystem::path& path);

  MarkedGraph graph(const std::filesystem::path& path);
  CoverMap cover(const std::filesystem::path& path, const MarkedGraph& base, const MarkedGraph* total = nullptr);
  /// Without `graph`, a map on graph G may also take its domain from a
  /// sibling file G.graph.
  GraphMap map(const std::filesystem::path& path, const MarkedGraph* graph = nullptr);
  LoadedSystem system(const std::filesystem::path& path);

  const std::vector<InputDigest>& inputs() const { return inputs_; }

 private:
  std::vector<InputDigest> inputs_;
  std::map<std::string, std::string> cache_;
};

}  // namespace fga
