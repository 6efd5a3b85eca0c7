#pragma once

#include <string>

#include "fga/io.hpp"

#ifndef FGA_DEMO_DIR
#error "FGA_DEMO_DIR must point at the demo corpus"
#endif

namespace testing {

inline std::string demo(const std::string& file) { return std::string(FGA_DEMO_DIR) + "/" + file; }

inline fga::MarkedGraph rose3() { return fga::MarkedGraph::rose({"a", "b", "c"}, "rose"); }

inline fga::GraphMap load_map(const std::string& file) {
  fga::Loader l;
  return l.map(demo(file));
}

inline fga::LoadedSystem load_system(const std::string& file) {
  fga::Loader l;
  return l.system(demo(file));
}

}  // namespace testing
