#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fpnc/netmodel/network.hpp"

namespace fpnc {

// Line-oriented text format:
//
//   # fpnc network
//   SERVERS
//   <id> <rate> <latency>
//   LINKS
//   <src-id> <dst-id>
//   FLOWS
//   <id> <rate> <burst> <server-id>...
//   FOI
//   <flow-id>
//
// Numbers are "p/q", integers or decimals. '#' starts a comment. serialize()
// writes the canonical form (numbers as reduced "p/q"), which parses back to
// the same text.

/// Throws UsageError with the offending line number.
ServerGraph parse_network(std::string_view text);
std::string serialize_network(const ServerGraph& net);

ServerGraph read_network_file(const std::filesystem::path& path);
void write_network_file(const std::filesystem::path& path, const ServerGraph& net);

}  // namespace fpnc
