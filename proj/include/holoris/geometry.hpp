#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <utility>
#include <vector>

namespace holoris {

using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299'792'458.0;

// Uniform planar array with constant spacing.
//
// Axis "a" is y for the transmit/receive surfaces and x for the RIS; axis "b"
// is z for the transmit/receive surfaces and y for the RIS.
struct SurfaceSpec {
  int count_a = 1;
  int count_b = 1;
  double spacing = 0.0;       // [m]
  double element_gain = 1.0;  // linear power gain

  std::size_t size() const { return static_cast<std::size_t>(count_a) * static_cast<std::size_t>(count_b); }
  double element_area() const { return spacing * spacing; }
};

enum class Surface { Tx, Rx, Ris };

// Placement of the three surfaces (all lengths in meters).
struct Layout {
  double wall_distance = 0.0;  // distance between the Tx and Rx walls
  double ris_offset = 0.0;     // RIS center to the Tx wall
  double tx_height = 0.0;      // Tx center above the RIS plane
  double rx_height = 0.0;      // Rx center above the RIS plane
};

// Validated scenario. The Tx surface lies on the plane x = -ris_offset, the Rx
// surface on x = wall_distance - ris_offset, and the RIS on z = 0 centered at
// the origin. Throws std::invalid_argument on construction if any invariant
// is violated.
class ScenarioGeometry {
 public:
  ScenarioGeometry(SurfaceSpec tx, SurfaceSpec rx, SurfaceSpec ris, Layout layout, double wavelength);

  const SurfaceSpec& tx() const { return tx_; }
  const SurfaceSpec& rx() const { return rx_; }
  const SurfaceSpec& ris() const { return ris_; }
  const SurfaceSpec& surface(Surface s) const;
  const Layout& layout() const { return layout_; }

  double wall_distance() const { return layout_.wall_distance; }
  double ris_offset() const { return layout_.ris_offset; }
  double tx_height() const { return layout_.tx_height; }
  double rx_height() const { return layout_.rx_height; }
  double wavelength() const { return wavelength_; }
  double wavenumber() const;

  Vec3 center(Surface s) const;

 private:
  SurfaceSpec tx_;
  SurfaceSpec rx_;
  SurfaceSpec ris_;
  Layout layout_;
  double wavelength_;
};

// Convenience constructor for the usual setup: all surfaces at half-wavelength
// spacing, element gains given in dBi.
ScenarioGeometry make_half_wavelength_geometry(double frequency_hz, int tx_y, int tx_z, int rx_y, int rx_z,
                                               int ris_x, int ris_y, double tx_gain_dbi, double rx_gain_dbi,
                                               Layout layout);

// Linear element index, zero based. For Tx/Rx the z index is the outer one
// (l = l_z * L_y + l_y), for the RIS the x index is the outer one
// (n = n_x * N_y + n_y).
std::size_t element_index(Surface kind, const SurfaceSpec& spec, int a, int b);
std::pair<int, int> element_axes(Surface kind, const SurfaceSpec& spec, std::size_t index);

// Offset of the i-th element (zero based) from the array center along an axis
// holding `count` elements.
inline double axis_offset(int i, int count, double spacing) { return spacing * (i - 0.5 * (count - 1)); }

Vec3 element_position(const ScenarioGeometry& geom, Surface surface, std::size_t index);
std::vector<Vec3> element_positions(const ScenarioGeometry& geom, Surface surface);

inline double exact_distance(const Vec3& p, const Vec3& q) { return (p - q).norm(); }

// Center-to-center distance between the Tx and Rx surfaces.
double direct_center_distance(const ScenarioGeometry& geom);

// Distances from the Tx center to RIS cell n and from cell n to the Rx center.
std::pair<double, double> focus_distances(const ScenarioGeometry& geom, std::size_t n);

// First-order expansion of focus_distances in the cell x coordinate.
std::pair<double, double> farfield_distances(const ScenarioGeometry& geom, std::size_t n);

}  // namespace holoris
