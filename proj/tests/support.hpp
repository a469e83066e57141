#pragma once

#include <string>

#include "clg/io.hpp"
#include "clg/model.hpp"

namespace clg::testkit {

inline std::string fixture(const std::string& name) { return std::string(CLG_FIXTURE_DIR) + "/" + name; }

inline Network load_fixture(const std::string& name) { return load_network_file(fixture(name)); }

inline VariableId id(const Network& net, const std::string& name) { return *net.find(name); }

}  // namespace clg::testkit
