#include "holoris/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holoris {

namespace {

void check_surface(const SurfaceSpec& s, const char* name) {
  if (s.count_a < 1 || s.count_b < 1) {
    throw std::invalid_argument(std::string(name) + ": element counts must be at least 1");
  }
  if (!(s.spacing > 0.0)) {
    throw std::invalid_argument(std::string(name) + ": spacing must be positive");
  }
  if (!(s.element_gain > 0.0)) {
    throw std::invalid_argument(std::string(name) + ": element gain must be positive");
  }
}

void check_index(const SurfaceSpec& spec, std::size_t n) {
  if (n >= spec.size()) {
    throw std::out_of_range("element index " + std::to_string(n) + " out of range (size " +
                            std::to_string(spec.size()) + ")");
  }
}

}  // namespace

ScenarioGeometry::ScenarioGeometry(SurfaceSpec tx, SurfaceSpec rx, SurfaceSpec ris, Layout layout, double wavelength)
    : tx_(tx), rx_(rx), ris_(ris), layout_(layout), wavelength_(wavelength) {
  check_surface(tx_, "tx");
  check_surface(rx_, "rx");
  check_surface(ris_, "ris");
  if (!(layout_.wall_distance > 0.0)) throw std::invalid_argument("wall_distance must be positive");
  if (!(layout_.ris_offset > 0.0 && layout_.ris_offset < layout_.wall_distance)) {
    throw std::invalid_argument("ris_offset must lie strictly between 0 and wall_distance");
  }
  if (!(layout_.tx_height > 0.0)) throw std::invalid_argument("tx_height must be positive");
  if (!(layout_.rx_height > 0.0)) throw std::invalid_argument("rx_height must be positive");
  if (!(wavelength_ > 0.0)) throw std::invalid_argument("wavelength must be positive");
}

const SurfaceSpec& ScenarioGeometry::surface(Surface s) const {
  switch (s) {
    case Surface::Tx: return tx_;
    case Surface::Rx: return rx_;
    case Surface::Ris: return ris_;
  }
  throw std::invalid_argument("unknown surface");
}

double ScenarioGeometry::wavenumber() const { return 2.0 * std::numbers::pi / wavelength_; }

Vec3 ScenarioGeometry::center(Surface s) const {
  switch (s) {
    case Surface::Tx: return {-layout_.ris_offset, 0.0, layout_.tx_height};
    case Surface::Rx: return {layout_.wall_distance - layout_.ris_offset, 0.0, layout_.rx_height};
    case Surface::Ris: return Vec3::Zero();
  }
  throw std::invalid_argument("unknown surface");
}

ScenarioGeometry make_half_wavelength_geometry(double frequency_hz, int tx_y, int tx_z, int rx_y, int rx_z,
                                               int ris_x, int ris_y, double tx_gain_dbi, double rx_gain_dbi,
                                               Layout layout) {
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
  const double lambda = kSpeedOfLight / frequency_hz;
  const double d = 0.5 * lambda;
  const SurfaceSpec tx{tx_y, tx_z, d, std::pow(10.0, tx_gain_dbi / 10.0)};
  const SurfaceSpec rx{rx_y, rx_z, d, std::pow(10.0, rx_gain_dbi / 10.0)};
  const SurfaceSpec ris{ris_x, ris_y, d, 1.0};
  return ScenarioGeometry(tx, rx, ris, layout, lambda);
}

std::size_t element_index(Surface kind, const SurfaceSpec& spec, int a, int b) {
  if (a < 0 || a >= spec.count_a || b < 0 || b >= spec.count_b) {
    throw std::out_of_range("element axes out of range");
  }
  if (kind == Surface::Ris) {
    return static_cast<std::size_t>(a) * spec.count_b + static_cast<std::size_t>(b);
  }
  return static_cast<std::size_t>(b) * spec.count_a + static_cast<std::size_t>(a);
}

std::pair<int, int> element_axes(Surface kind, const SurfaceSpec& spec, std::size_t index) {
  check_index(spec, index);
  if (kind == Surface::Ris) {
    return {static_cast<int>(index / spec.count_b), static_cast<int>(index % spec.count_b)};
  }
  return {static_cast<int>(index % spec.count_a), static_cast<int>(index / spec.count_a)};
}

Vec3 element_position(const ScenarioGeometry& geom, Surface surface, std::size_t index) {
  const SurfaceSpec& spec = geom.surface(surface);
  const auto [a, b] = element_axes(surface, spec, index);
  const double off_a = axis_offset(a, spec.count_a, spec.spacing);
  const double off_b = axis_offset(b, spec.count_b, spec.spacing);
  const Vec3 c = geom.center(surface);
  if (surface == Surface::Ris) {
    return {off_a, off_b, 0.0};
  }
  return {c.x(), off_a, c.z() + off_b};
}

std::vector<Vec3> element_positions(const ScenarioGeometry& geom, Surface surface) {
  const std::size_t count = geom.surface(surface).size();
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(element_position(geom, surface, i));
  return out;
}

double direct_center_distance(const ScenarioGeometry& geom) {
  const double dh = geom.tx_height() - geom.rx_height();
  return std::sqrt(geom.wall_distance() * geom.wall_distance() + dh * dh);
}

std::pair<double, double> focus_distances(const ScenarioGeometry& geom, std::size_t n) {
  const Vec3 cell = element_position(geom, Surface::Ris, n);
  const double x = cell.x();
  const double y = cell.y();
  const double dx1 = -geom.ris_offset() - x;
  const double dx2 = geom.wall_distance() - geom.ris_offset() - x;
  const double lt = geom.tx_height();
  const double lr = geom.rx_height();
  return {std::sqrt(dx1 * dx1 + y * y + lt * lt), std::sqrt(dx2 * dx2 + y * y + lr * lr)};
}

std::pair<double, double> farfield_distances(const ScenarioGeometry& geom, std::size_t n) {
  const double x = element_position(geom, Surface::Ris, n).x();
  const double to_rx = geom.wall_distance() - geom.ris_offset();
  const double d1 = std::hypot(geom.ris_offset(), geom.tx_height());
  const double d2 = std::hypot(to_rx, geom.rx_height());
  return {d1 + geom.ris_offset() * x / d1, d2 - to_rx * x / d2};
}

}  // namespace holoris
