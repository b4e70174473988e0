#include "fpnc/netmodel/network_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace

ServerGraph parse_network(std::string_view text) {
  enum class Section { none, servers, links, flows, foi };
  ServerGraph net;
  Section section = Section::none;
  std::size_t line_no = 0;

  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto fail = [&](const std::string& what) {
      return UsageError("line " + std::to_string(line_no) + ": " + what);
    };
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto words = split_words(raw);
    if (words.empty()) continue;

    if (words.size() == 1) {
      const std::string& w = words[0];
      if (w == "SERVERS") { section = Section::servers; continue; }
      if (w == "LINKS") { section = Section::links; continue; }
      if (w == "FLOWS") { section = Section::flows; continue; }
      if (w == "FOI") { section = Section::foi; continue; }
    }

    auto number = [&](const std::string& w) {
      try {
        return parse_rational(w);
      } catch (const std::invalid_argument& e) {
        throw fail(e.what());
      }
    };
    auto server = [&](const std::string& w) {
      auto idx = net.server_index(w);
      if (!idx) throw fail("unknown server '" + w + "'");
      return *idx;
    };

    switch (section) {
      case Section::none:
        throw fail("content before any section header");
      case Section::servers:
        if (words.size() != 3) throw fail("expected: <id> <rate> <latency>");
        if (net.server_index(words[0])) throw fail("duplicate server '" + words[0] + "'");
        net.servers.push_back({words[0], number(words[1]), number(words[2])});
        break;
      case Section::links:
        if (words.size() != 2) throw fail("expected: <src> <dst>");
        net.links.push_back({server(words[0]), server(words[1])});
        break;
      case Section::flows: {
        if (words.size() < 4) throw fail("expected: <id> <rate> <burst> <server>...");
        if (net.flow_index(words[0])) throw fail("duplicate flow '" + words[0] + "'");
        Flow f{words[0], number(words[1]), number(words[2]), {}};
        for (std::size_t i = 3; i < words.size(); ++i) f.path.push_back(server(words[i]));
        net.flows.push_back(std::move(f));
        break;
      }
      case Section::foi:
        if (words.size() != 1 || net.foi) throw fail("expected a single flow id");
        net.foi = words[0];
        break;
    }
  }
  if (net.foi && !net.flow_index(*net.foi))
    throw UsageError("flow of interest '" + *net.foi + "' is not a flow");
  return net;
}

std::string serialize_network(const ServerGraph& net) {
  std::ostringstream out;
  out << "# fpnc network\n";
  out << "SERVERS\n";
  for (const auto& s : net.servers)
    out << s.id << ' ' << format_rational(s.rate) << ' ' << format_rational(s.latency) << '\n';
  out << "LINKS\n";
  for (const auto& l : net.links) out << net.servers[l.src].id << ' ' << net.servers[l.dst].id << '\n';
  out << "FLOWS\n";
  for (const auto& f : net.flows) {
    out << f.id << ' ' << format_rational(f.rate) << ' ' << format_rational(f.burst);
    for (std::size_t s : f.path) out << ' ' << net.servers[s].id;
    out << '\n';
  }
  if (net.foi) out << "FOI\n" << *net.foi << '\n';
  return out.str();
}

ServerGraph read_network_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

void write_network_file(const std::filesystem::path& path, const ServerGraph& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << serialize_network(net);
}

}  // namespace fpnc
