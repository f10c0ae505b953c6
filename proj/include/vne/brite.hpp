#pragma once

// BRITE text topology files.
//
//   Topology: ( <N> Nodes, <E> Edges )
//
//   Nodes: ( <N> )
//   <id> <x> <y> <indeg> <outdeg> <as_id> <type>
//
//   Edges: ( <E> )
//   <id> <from> <to> <length> <delay> <bw> <as_from> <as_to> <type>
//
// Local column convention: <indeg> carries the node CPU (capacity for
// substrates, demand for virtual networks), <outdeg> the node degree, and
// <as_id> the server-profile index. <bw> carries link bandwidth.

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vne/topology.hpp"

namespace vne {

class BriteParseError : public std::runtime_error {
 public:
  BriteParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

std::string write_brite(const SubstrateNetwork& net);
std::string write_brite(const VirtualNetwork& net);

/// Power figures come from server_profiles[as_id]; CPU capacity from <indeg>.
SubstrateNetwork read_brite_substrate(std::string_view text,
                                      std::span<const ServerProfile> server_profiles);
SubstrateNetwork read_brite_substrate(std::string_view text);

/// Rejects disconnected graphs.
VirtualNetwork read_brite_virtual(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace vne
