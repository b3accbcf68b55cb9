#pragma once

#include "holoris/channels.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace holoris {

// Binary dump of named complex matrices; layout documented in
// docs/channel_dump.md. All integers and doubles are little-endian.
using NamedMatrix = std::pair<std::string, Eigen::MatrixXcd>;

void write_matrices(std::ostream& out, const std::vector<NamedMatrix>& matrices);
std::vector<NamedMatrix> read_matrices(std::istream& in);

// Writes h, g, h_dir, h_los, g_los, h_dir_los in that order.
void write_channel_dump(std::ostream& out, const ChannelSet& channels);
ChannelSet read_channel_dump(std::istream& in);

}  // namespace holoris
