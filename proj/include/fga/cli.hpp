#pragma once

// Command implementations behind the fga binary. Each command returns a
// JSON report; the text form is rendered from the same object.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "fga/legality.hpp"

namespace fga {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputMode { Text, Json };

struct RunConfig {
  std::string command;  // analyze | legality | independence | stretch | flare
  std::vector<std::string> inputs;
  int power = 1;
  std::size_t depth = 64;
  bool auto_double = true;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
  int m_max = 12;
  double lambda = 2.0;
  std::size_t girth = 8;
  std::vector<int> candidates{4, 8, 16, 24};
  std::vector<std::size_t> lengths{8, 16, 32};
  std::size_t word_min = 16;
  std::size_t word_max = 40;
  std::string vertex;
  std::string circuit;
  int iters = 20;
  double factor = 5.0;
  LegMode mode = LegMode::Leaf;
  int scan_len = 6;
  int scan_iter = 12;
  int rtt_length = 12;
  OutputMode output = OutputMode::Text;
};

struct CommandResult {
  nlohmann::ordered_json report;
  int exit_code = 0;
};

/// Throws fga::Error for unusable input.
CommandResult run_command(const RunConfig& cfg);

CommandResult cmd_analyze(const RunConfig& cfg);
CommandResult cmd_legality(const RunConfig& cfg);
CommandResult cmd_independence(const RunConfig& cfg);
CommandResult cmd_stretch(const RunConfig& cfg);
/// Exit code 0 iff some candidate exponent meets the threshold.
CommandResult cmd_flare(const RunConfig& cfg);

/// JSON is pretty-printed; text is key=value lines with one line per table
/// row, leaving out the fields listed as JSON-only in the report.
std::string render(const nlohmann::ordered_json& report, OutputMode mode);

}  // namespace fga
