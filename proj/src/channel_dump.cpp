#include "holoris/channel_dump.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace holoris {

namespace {

static_assert(std::endian::native == std::endian::little, "channel dump assumes a little-endian host");

constexpr std::array<char, 8> kMagic{'H', 'O', 'L', 'O', 'C', 'H', 'N', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("channel dump: unexpected end of stream");
  return value;
}

}  // namespace

void write_matrices(std::ostream& out, const std::vector<NamedMatrix>& matrices) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint64_t>(out, matrices.size());
  for (const auto& [name, m] : matrices) {
    put<std::uint64_t>(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        put<double>(out, m(r, c).real());
        put<double>(out, m(r, c).imag());
      }
    }
  }
  if (!out) throw std::runtime_error("channel dump: write failed");
}

std::vector<NamedMatrix> read_matrices(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("channel dump: bad magic");
  const auto count = get<std::uint64_t>(in);
  std::vector<NamedMatrix> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = get<std::uint64_t>(in);
    if (len > 4096) throw std::runtime_error("channel dump: unreasonable name length");
    std::string name(len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(len));
    const auto rows = get<std::uint64_t>(in);
    const auto cols = get<std::uint64_t>(in);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        m(r, c) = {re, im};
      }
    }
    out.emplace_back(std::move(name), std::move(m));
  }
  return out;
}

void write_channel_dump(std::ostream& out, const ChannelSet& c) {
  write_matrices(out, {{"h", c.h}, {"g", c.g}, {"h_dir", c.h_dir},
                       {"h_los", c.h_los}, {"g_los", c.g_los}, {"h_dir_los", c.h_dir_los}});
}

ChannelSet read_channel_dump(std::istream& in) {
  std::map<std::string, Eigen::MatrixXcd> by_name;
  for (auto& [name, m] : read_matrices(in)) by_name[name] = std::move(m);
  auto take = [&](const char* key) {
    auto it = by_name.find(key);
    if (it == by_name.end()) throw std::runtime_error(std::string("channel dump: missing matrix ") + key);
    return std::move(it->second);
  };
  ChannelSet c;
  c.h = take("h");
  c.g = take("g");
  c.h_dir = take("h_dir");
  c.h_los = take("h_los");
  c.g_los = take("g_los");
  c.h_dir_los = take("h_dir_los");
  return c;
}

}  // namespace holoris
