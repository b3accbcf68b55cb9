#include "holoris/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace holoris {

namespace {

using json = nlohmann::json;

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(join(path_, key), "must be finite");
    return x;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    return v->get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw ConfigError(join(path_, key), "expected a nonnegative integer");
    }
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(join(path_, key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_number()) throw ConfigError(join(path_, key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, join(path_, key));
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

HoloSurfaceConfig read_holo(Section s) {
  HoloSurfaceConfig c;
  c.count_y = s.integer("count_y", c.count_y);
  c.count_z = s.integer("count_z", c.count_z);
  c.gain_dbi = s.number("gain_dbi", c.gain_dbi);
  if (c.count_y < 1) throw ConfigError(s.at("count_y"), "must be at least 1");
  if (c.count_z < 1) throw ConfigError(s.at("count_z"), "must be at least 1");
  s.finish();
  return c;
}

GeometryConfig read_geometry(Section s) {
  GeometryConfig g;
  g.wall_distance_m = s.number("wall_distance_m", g.wall_distance_m);
  g.ris_offset_m = s.optional_number("ris_offset_m");
  g.ris_offset_fraction = s.optional_number("ris_offset_fraction");
  g.tx_height_m = s.number("tx_height_m", g.tx_height_m);
  g.rx_height_m = s.number("rx_height_m", g.rx_height_m);
  g.frequency_hz = s.number("frequency_hz", g.frequency_hz);
  if (auto tx = s.child("tx")) g.tx = read_holo(*tx);
  if (auto rx = s.child("rx")) g.rx = read_holo(*rx);
  if (auto ris = s.child("ris")) {
    g.ris_count_x = ris->integer("count_x", g.ris_count_x);
    g.ris_count_y = ris->integer("count_y", g.ris_count_y);
    if (g.ris_count_x < 1) throw ConfigError(ris->at("count_x"), "must be at least 1");
    if (g.ris_count_y < 1) throw ConfigError(ris->at("count_y"), "must be at least 1");
    ris->finish();
  }
  if (g.ris_offset_m && g.ris_offset_fraction) {
    throw ConfigError(s.at("ris_offset_m"), "give either ris_offset_m or ris_offset_fraction, not both");
  }
  if (!g.ris_offset_m && !g.ris_offset_fraction) g.ris_offset_fraction = 0.5;
  s.finish();
  return g;
}

ChannelConfig read_channel(Section s) {
  ChannelConfig c;
  c.rician_k = s.numbers("rician_k", c.rician_k);
  c.direct_pathloss_exponent = s.number("direct_pathloss_exponent", c.direct_pathloss_exponent);
  c.direct_blocked = s.boolean("direct_blocked", c.direct_blocked);
  c.seed = s.unsigned_integer("seed", c.seed);
  if (s.has("trials")) c.trials = s.integer("trials", 1);
  else s.find("trials");
  if (c.rician_k.empty()) throw ConfigError(s.at("rician_k"), "must not be empty");
  for (std::size_t i = 0; i < c.rician_k.size(); ++i) {
    if (!(c.rician_k[i] >= 0.0)) {
      throw ConfigError(s.at("rician_k") + "[" + std::to_string(i) + "]", "must be nonnegative");
    }
  }
  if (!(c.direct_pathloss_exponent >= 2.0)) throw ConfigError(s.at("direct_pathloss_exponent"), "must be >= 2");
  if (c.trials && *c.trials < 1) throw ConfigError(s.at("trials"), "must be at least 1");
  s.finish();
  return c;
}

SweepConfig read_sweep(Section s) {
  SweepConfig c;
  const std::string variable = s.string("variable", "none");
  if (variable == "none") c.variable = SweepVariable::None;
  else if (variable == "ris_size") c.variable = SweepVariable::RisSize;
  else if (variable == "wall_distance") c.variable = SweepVariable::WallDistance;
  else if (variable == "ris_offset") c.variable = SweepVariable::RisOffset;
  else throw ConfigError(s.at("variable"), "expected one of none, ris_size, wall_distance, ris_offset");
  c.values = s.numbers("values", {});
  if (c.variable != SweepVariable::None && c.values.empty()) throw ConfigError(s.at("values"), "must not be empty");
  s.finish();
  return c;
}

PowerConfig read_power(Section s) {
  PowerConfig p;
  p.tx_power_dbm = s.number("tx_power_dbm", p.tx_power_dbm);
  p.noise_psd_dbm_per_hz = s.number("noise_psd_dbm_per_hz", p.noise_psd_dbm_per_hz);
  p.bandwidth_hz = s.number("bandwidth_hz", p.bandwidth_hz);
  if (!(p.bandwidth_hz > 0.0)) throw ConfigError(s.at("bandwidth_hz"), "must be positive");
  s.finish();
  return p;
}

void read_optimizer(Section s, PgmSettings& o) {
  o.max_step_theta = s.number("max_step_theta", o.max_step_theta);
  o.max_step_q = s.number("max_step_q", o.max_step_q);
  o.contraction_theta = s.number("contraction_theta", o.contraction_theta);
  o.contraction_q = s.number("contraction_q", o.contraction_q);
  o.margin_theta = s.number("margin_theta", o.margin_theta);
  o.margin_q = s.number("margin_q", o.margin_q);
  o.max_iterations = s.integer("max_iterations", o.max_iterations);
  o.max_contractions = s.integer("max_contractions", o.max_contractions);
  o.rel_tolerance = s.number("rel_tolerance", o.rel_tolerance);
  s.finish();
}

std::vector<SchemeId> read_schemes(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) throw ConfigError(path, "expected a non-empty array of scheme names");
  std::vector<SchemeId> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (!node[i].is_string()) throw ConfigError(at, "expected a scheme name");
    auto id = scheme_from_string(node[i].get<std::string>());
    if (!id) throw ConfigError(at, "unknown scheme '" + node[i].get<std::string>() + "'");
    out.push_back(*id);
  }
  return out;
}

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::None: return "none";
    case SweepVariable::RisSize: return "ris_size";
    case SweepVariable::WallDistance: return "wall_distance";
    case SweepVariable::RisOffset: return "ris_offset";
  }
  return "unknown";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double ExperimentConfig::tx_power_w() const { return dbm_to_watts(power.tx_power_dbm); }

double ExperimentConfig::noise_power_w() const {
  return dbm_to_watts(power.noise_psd_dbm_per_hz) * power.bandwidth_hz;
}

int ExperimentConfig::trials_for(double rician_k) const {
  if (channel.trials) return *channel.trials;
  return rician_k < 1000.0 ? 50 : 1;
}

ScenarioGeometry ExperimentConfig::base_geometry() const {
  const auto& g = geometry;
  const double offset = g.ris_offset_m ? *g.ris_offset_m : *g.ris_offset_fraction * g.wall_distance_m;
  return make_half_wavelength_geometry(g.frequency_hz, g.tx.count_y, g.tx.count_z, g.rx.count_y, g.rx.count_z,
                                       g.ris_count_x, g.ris_count_y, g.tx.gain_dbi, g.rx.gain_dbi,
                                       {g.wall_distance_m, offset, g.tx_height_m, g.rx_height_m});
}

ScenarioGeometry ExperimentConfig::geometry_at(double value) const {
  ExperimentConfig copy = *this;
  auto& g = copy.geometry;
  switch (sweep.variable) {
    case SweepVariable::None: break;
    case SweepVariable::RisSize:
      g.ris_count_x = static_cast<int>(std::lround(value));
      g.ris_count_y = g.ris_count_x;
      break;
    case SweepVariable::WallDistance: g.wall_distance_m = value; break;
    case SweepVariable::RisOffset:
      g.ris_offset_m = value;
      g.ris_offset_fraction.reset();
      break;
  }
  return copy.base_geometry();
}

void ExperimentConfig::validate() const {
  const auto& g = geometry;
  if (!(g.frequency_hz > 0.0)) throw ConfigError("geometry.frequency_hz", "must be positive");
  if (!(g.wall_distance_m > 0.0)) throw ConfigError("geometry.wall_distance_m", "must be positive");
  if (!(g.tx_height_m > 0.0)) throw ConfigError("geometry.tx_height_m", "must be positive");
  if (!(g.rx_height_m > 0.0)) throw ConfigError("geometry.rx_height_m", "must be positive");
  if (g.ris_offset_m && !(*g.ris_offset_m > 0.0 && *g.ris_offset_m < g.wall_distance_m)) {
    throw ConfigError("geometry.ris_offset_m", "must lie strictly between 0 and wall_distance_m");
  }
  if (g.ris_offset_fraction && !(*g.ris_offset_fraction > 0.0 && *g.ris_offset_fraction < 1.0)) {
    throw ConfigError("geometry.ris_offset_fraction", "must lie strictly between 0 and 1");
  }
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const double v = sweep.values[i];
    const std::string at = "sweep.values[" + std::to_string(i) + "]";
    switch (sweep.variable) {
      case SweepVariable::None: break;
      case SweepVariable::RisSize:
        if (!(v >= 1.0) || v != std::round(v)) throw ConfigError(at, "RIS side length must be a positive integer");
        break;
      case SweepVariable::WallDistance:
        if (!(v > 0.0)) throw ConfigError(at, "wall distance must be positive");
        if (g.ris_offset_m && !(*g.ris_offset_m < v)) {
          throw ConfigError(at, "wall distance must exceed geometry.ris_offset_m");
        }
        break;
      case SweepVariable::RisOffset:
        if (!(v > 0.0 && v < g.wall_distance_m)) {
          throw ConfigError(at, "RIS offset must lie strictly between 0 and wall_distance_m");
        }
        break;
    }
  }
  if (modes.count < 1) throw ConfigError("modes.count", "must be at least 1");
  try {
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("optimizer", e.what());
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  Section top(root, "");
  ExperimentConfig c;
  c.scenario = top.string("scenario", c.scenario);
  if (auto s = top.child("geometry")) c.geometry = read_geometry(*s);
  if (auto s = top.child("channel")) c.channel = read_channel(*s);
  if (const json* s = top.find("schemes")) c.schemes = read_schemes(*s, "schemes");
  if (auto s = top.child("sweep")) c.sweep = read_sweep(*s);
  if (auto s = top.child("power")) c.power = read_power(*s);
  if (auto s = top.child("optimizer")) read_optimizer(*s, c.optimizer);
  if (auto s = top.child("modes")) {
    c.modes.count = s->integer("count", c.modes.count);
    const std::string scheme = s->string("scheme", std::string(to_string(c.modes.scheme)));
    auto id = scheme_from_string(scheme);
    if (!id) throw ConfigError(s->at("scheme"), "unknown scheme '" + scheme + "'");
    c.modes.scheme = *id;
    s->finish();
  }
  top.finish();

  c.optimizer.noise_power = c.noise_power_w();
  c.optimizer.power_budget = c.tx_power_w();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace holoris
