#include "vne/brite.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace vne {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr std::string_view kNodeType = "RT_NODE";
constexpr std::string_view kEdgeType = "E_RT";

template <class Node, class Link, class CpuOf, class ProfileOf, class BwOf>
std::string write_common(const std::vector<Node>& nodes, const std::vector<Link>& links,
                         const auto& degree_of, CpuOf cpu_of, ProfileOf profile_of, BwOf bw_of) {
  std::ostringstream os;
  os << "Topology: ( " << nodes.size() << " Nodes, " << links.size() << " Edges )\n\n";
  os << "Nodes: ( " << nodes.size() << " )\n";
  for (const Node& n : nodes) {
    os << n.id << ' ' << format_double(n.x) << ' ' << format_double(n.y) << ' '
       << format_double(cpu_of(n)) << ' ' << degree_of(n.id) << ' ' << profile_of(n) << ' '
       << kNodeType << '\n';
  }
  os << "\nEdges: ( " << links.size() << " )\n";
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    const Node& a = nodes[static_cast<std::size_t>(l.a)];
    const Node& b = nodes[static_cast<std::size_t>(l.b)];
    os << i << ' ' << l.a << ' ' << l.b << ' ' << format_double(std::hypot(a.x - b.x, a.y - b.y))
       << " 0 " << format_double(bw_of(l)) << ' ' << profile_of(a) << ' ' << profile_of(b) << ' '
       << kEdgeType << '\n';
  }
  return os.str();
}

struct RawNode {
  int line;
  double x, y, cpu;
  long long as_id;
};

struct RawEdge {
  int line;
  long long from, to;
  double bw;
};

struct RawTopology {
  std::vector<RawNode> nodes;
  std::vector<RawEdge> edges;
  int last_line = 0;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, int line, const char* field) {
  T value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw BriteParseError(line, std::string("bad ") + field + " '" + std::string(tok) + "'");
  }
  return value;
}

/// Parses "( <count> )" following a section keyword.
long long section_count(const std::vector<std::string_view>& tok, int line) {
  if (tok.size() != 4 || tok[1] != "(" || tok[3] != ")") {
    throw BriteParseError(line, "malformed section header");
  }
  return parse_number<long long>(tok[2], line, "section count");
}

RawTopology parse_raw(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }

  RawTopology raw;
  if (lines.empty()) throw BriteParseError(1, "empty document");
  const auto head = split(lines[0]);
  if (head.size() != 7 || head[0] != "Topology:" || head[1] != "(" || head[3] != "Nodes," ||
      head[5] != "Edges" || head[6] != ")") {
    throw BriteParseError(1, "expected 'Topology: ( <N> Nodes, <E> Edges )'");
  }
  const auto n_nodes = parse_number<long long>(head[2], 1, "node count");
  const auto n_edges = parse_number<long long>(head[4], 1, "edge count");
  if (n_nodes < 0 || n_edges < 0) throw BriteParseError(1, "negative count");

  enum class Section { none, nodes, edges } section = Section::none;
  long long declared = 0;
  bool saw_nodes = false;
  bool saw_edges = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int ln = static_cast<int>(i) + 1;
    const auto tok = split(lines[i]);
    if (tok.empty()) continue;
    raw.last_line = ln;
    if (tok[0].back() == ':') {
      if (tok[0] == "Nodes:") {
        if (saw_nodes) throw BriteParseError(ln, "duplicate Nodes section");
        declared = section_count(tok, ln);
        if (declared != n_nodes) throw BriteParseError(ln, "Nodes count disagrees with header");
        section = Section::nodes;
        saw_nodes = true;
      } else if (tok[0] == "Edges:") {
        if (saw_edges) throw BriteParseError(ln, "duplicate Edges section");
        if (!saw_nodes) throw BriteParseError(ln, "Edges section before Nodes section");
        if (static_cast<long long>(raw.nodes.size()) != n_nodes) {
          throw BriteParseError(ln, "expected " + std::to_string(n_nodes) + " node records");
        }
        declared = section_count(tok, ln);
        if (declared != n_edges) throw BriteParseError(ln, "Edges count disagrees with header");
        section = Section::edges;
        saw_edges = true;
      } else {
        throw BriteParseError(ln, "unknown section '" + std::string(tok[0]) + "'");
      }
      continue;
    }
    switch (section) {
      case Section::none:
        throw BriteParseError(ln, "record outside any section");
      case Section::nodes: {
        if (tok.size() != 7) throw BriteParseError(ln, "node record needs 7 fields");
        const auto id = parse_number<long long>(tok[0], ln, "node id");
        if (id != static_cast<long long>(raw.nodes.size())) {
          throw BriteParseError(ln, "expected node id " + std::to_string(raw.nodes.size()));
        }
        if (id >= n_nodes) throw BriteParseError(ln, "more node records than declared");
        RawNode n{ln, parse_number<double>(tok[1], ln, "x"), parse_number<double>(tok[2], ln, "y"),
                  parse_number<double>(tok[3], ln, "cpu"), 0};
        parse_number<long long>(tok[4], ln, "degree");
        n.as_id = parse_number<long long>(tok[5], ln, "as_id");
        raw.nodes.push_back(n);
        break;
      }
      case Section::edges: {
        if (tok.size() != 9) throw BriteParseError(ln, "edge record needs 9 fields");
        const auto id = parse_number<long long>(tok[0], ln, "edge id");
        if (id != static_cast<long long>(raw.edges.size())) {
          throw BriteParseError(ln, "expected edge id " + std::to_string(raw.edges.size()));
        }
        if (id >= n_edges) throw BriteParseError(ln, "more edge records than declared");
        RawEdge e{ln, parse_number<long long>(tok[1], ln, "from"), parse_number<long long>(tok[2], ln, "to"),
                  0};
        parse_number<double>(tok[3], ln, "length");
        parse_number<double>(tok[4], ln, "delay");
        e.bw = parse_number<double>(tok[5], ln, "bandwidth");
        parse_number<long long>(tok[6], ln, "as_from");
        parse_number<long long>(tok[7], ln, "as_to");
        for (long long end : {e.from, e.to}) {
          if (end < 0 || end >= n_nodes) {
            throw BriteParseError(ln, "edge references unknown node " + std::to_string(end));
          }
        }
        raw.edges.push_back(e);
        break;
      }
    }
  }
  const int tail = static_cast<int>(lines.size());
  if (!saw_nodes) throw BriteParseError(tail, "missing Nodes section");
  if (static_cast<long long>(raw.nodes.size()) != n_nodes) {
    throw BriteParseError(tail, "expected " + std::to_string(n_nodes) + " node records");
  }
  if (n_edges > 0 && !saw_edges) throw BriteParseError(tail, "missing Edges section");
  if (static_cast<long long>(raw.edges.size()) != n_edges) {
    throw BriteParseError(tail, "expected " + std::to_string(n_edges) + " edge records");
  }
  return raw;
}

}  // namespace

std::string write_brite(const SubstrateNetwork& net) {
  return write_common(
      net.nodes(), net.links(), [&](NodeId id) { return net.neighbors(id).size(); },
      [](const SubstrateNode& n) { return n.cpu_capacity; },
      [](const SubstrateNode& n) { return n.profile; },
      [](const SubstrateLink& l) { return l.bw_capacity; });
}

std::string write_brite(const VirtualNetwork& net) {
  return write_common(
      net.nodes(), net.links(), [&](NodeId id) { return net.neighbors(id).size(); },
      [](const VirtualNode& n) { return n.cpu_demand; }, [](const VirtualNode&) { return 0; },
      [](const VirtualLink& l) { return l.bw_demand; });
}

SubstrateNetwork read_brite_substrate(std::string_view text,
                                      std::span<const ServerProfile> server_profiles) {
  const RawTopology raw = parse_raw(text);
  SubstrateNetwork net;
  for (const RawNode& r : raw.nodes) {
    if (r.as_id < 0 || static_cast<std::size_t>(r.as_id) >= server_profiles.size()) {
      throw BriteParseError(r.line, "unknown server profile " + std::to_string(r.as_id));
    }
    const ServerProfile& p = server_profiles[static_cast<std::size_t>(r.as_id)];
    SubstrateNode n;
    n.cpu_capacity = r.cpu;
    n.power_baseline = p.power_baseline;
    n.power_full = p.power_full;
    n.profile = static_cast<int>(r.as_id);
    n.x = r.x;
    n.y = r.y;
    try {
      net.add_node(n);
    } catch (const std::invalid_argument& e) {
      throw BriteParseError(r.line, e.what());
    }
  }
  for (const RawEdge& r : raw.edges) {
    try {
      net.add_link(static_cast<NodeId>(r.from), static_cast<NodeId>(r.to), r.bw);
    } catch (const std::invalid_argument& e) {
      throw BriteParseError(r.line, e.what());
    }
  }
  return net;
}

SubstrateNetwork read_brite_substrate(std::string_view text) {
  const auto profiles = default_server_profiles();
  return read_brite_substrate(text, profiles);
}

VirtualNetwork read_brite_virtual(std::string_view text) {
  const RawTopology raw = parse_raw(text);
  VirtualNetwork net;
  for (const RawNode& r : raw.nodes) {
    try {
      net.add_node(r.cpu, r.x, r.y);
    } catch (const std::invalid_argument& e) {
      throw BriteParseError(r.line, e.what());
    }
  }
  for (const RawEdge& r : raw.edges) {
    try {
      net.add_link(static_cast<NodeId>(r.from), static_cast<NodeId>(r.to), r.bw);
    } catch (const std::invalid_argument& e) {
      throw BriteParseError(r.line, e.what());
    }
  }
  if (!net.connected()) throw BriteParseError(raw.last_line, "virtual network is disconnected");
  return net;
}

}  // namespace vne
