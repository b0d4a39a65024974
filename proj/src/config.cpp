#include "qfgeo/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace qfgeo {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ThetaMode parse_theta_mode(std::string_view v) {
  if (v == "linear") return ThetaMode::linear;
  if (v == "literal") return ThetaMode::literal;
  throw ConfigError("theta_mode must be linear or literal");
}

}  // namespace

bool parse_bool(std::string_view text) {
  const auto v = trim(text);
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("expected a boolean, got '" + std::string(v) + "'");
}

double parse_double(std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw ConfigError("expected a number, got '" + s + "'");
  }
  return x;
}

std::int64_t parse_int(std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const long long x = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("expected an integer, got '" + s + "'");
  }
  return x;
}

void apply_setting(TrialConfig& cfg, std::string_view key, std::string_view value) {
  const auto v = trim(value);
  auto non_negative = [&](std::string_view k) {
    const auto x = parse_int(v);
    if (x < 0) throw ConfigError(std::string(k) + " must be non-negative");
    return x;
  };

  if (key == "size") cfg.network.n = static_cast<std::size_t>(non_negative(key));
  else if (key == "density") cfg.network.rho = parse_double(v);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(non_negative(key));
  else if (key == "flows") cfg.flow_count = static_cast<std::size_t>(non_negative(key));
  else if (key == "flow_size_bits") cfg.flow_size_bits = parse_double(v);
  else if (key == "packet_bits") cfg.packet_bits = parse_double(v);
  else if (key == "mobility") cfg.mobility_mps = parse_double(v);
  else if (key == "jammer") cfg.jammer.enabled = parse_bool(v);
  else if (key == "jammer_x") {
    cfg.jammer.position = Point{parse_double(v), cfg.jammer.position.value_or(Point{}).y};
  } else if (key == "jammer_y") {
    cfg.jammer.position = Point{cfg.jammer.position.value_or(Point{}).x, parse_double(v)};
  } else if (key == "jammer_power_db") cfg.jammer.power_db = parse_double(v);
  else if (key == "jammer_radius_km") cfg.jammer.radius_km = parse_double(v);
  else if (key == "jammer_channel") cfg.jammer.channel = static_cast<int>(parse_int(v));
  else if (key == "duration_s") cfg.duration_s = parse_double(v);
  else if (key == "slot_s") cfg.slot_s = parse_double(v);
  else if (key == "hello_period_s") cfg.hello_period_s = parse_double(v);
  else if (key == "arrival_s") cfg.arrival_s = parse_double(v);
  else if (key == "neighbor_timeout_s") cfg.neighbor_timeout_s = parse_double(v);
  else if (key == "max_backoff_slots") cfg.max_backoff_slots = static_cast<int>(parse_int(v));
  else if (key == "theta_window_slots") cfg.theta_window_slots = static_cast<int>(parse_int(v));
  else if (key == "radius_km") cfg.radio.radius_km = parse_double(v);
  else if (key == "radios") cfg.radio.radios = static_cast<int>(parse_int(v));
  else if (key == "data_channels") cfg.radio.data_channels = static_cast<int>(parse_int(v));
  else if (key == "data_rate_bps") cfg.radio.data_rate_bps = parse_double(v);
  else if (key == "control_rate_bps") cfg.radio.control_rate_bps = parse_double(v);
  else if (key == "ack_bits") cfg.radio.ack_bits = parse_double(v);
  else if (key == "bandwidth_bps") cfg.radio.bandwidth_bps = parse_double(v);
  else if (key == "protocol") cfg.protocol = parse_protocol(v);
  else if (key == "unbounded") {
    if (parse_bool(v)) cfg.protocol = ProtocolKind::qfgeo_unbounded;
  } else if (key == "epsilon") cfg.params.epsilon = parse_double(v);
  else if (key == "retx_max") cfg.params.retx_max = static_cast<int>(parse_int(v));
  else if (key == "c_min") cfg.params.c_min = parse_double(v);
  else if (key == "theta_mode") cfg.params.theta_mode = parse_theta_mode(v);
  else if (key == "alpha") cfg.params.model.alpha = parse_double(v);
  else if (key == "beta") cfg.params.model.beta = parse_double(v);
  else if (key == "gamma") cfg.params.model.gamma = parse_double(v);
  else if (key == "ell_min") cfg.params.model.ell_min = parse_double(v);
  else if (key == "log_beacons") cfg.log_beacons = parse_bool(v);
  else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

TrialConfig parse_trial_config(std::istream& in) {
  TrialConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

TrialConfig load_trial_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_trial_config(in);
}

std::string serialize_trial_config(const TrialConfig& c) {
  std::ostringstream o;
  o << "size=" << c.network.n << "\n"
    << "density=" << num(c.network.rho) << "\n"
    << "seed=" << c.seed << "\n"
    << "flows=" << c.flow_count << "\n"
    << "flow_size_bits=" << num(c.flow_size_bits) << "\n"
    << "packet_bits=" << num(c.packet_bits) << "\n"
    << "mobility=" << num(c.mobility_mps) << "\n"
    << "jammer=" << (c.jammer.enabled ? "on" : "off") << "\n";
  if (c.jammer.position) {
    o << "jammer_x=" << num(c.jammer.position->x) << "\n"
      << "jammer_y=" << num(c.jammer.position->y) << "\n";
  }
  o << "jammer_power_db=" << num(c.jammer.power_db) << "\n"
    << "jammer_radius_km=" << num(c.jammer.radius_km) << "\n"
    << "jammer_channel=" << c.jammer.channel << "\n"
    << "duration_s=" << num(c.duration_s) << "\n"
    << "slot_s=" << num(c.slot_s) << "\n"
    << "hello_period_s=" << num(c.hello_period_s) << "\n"
    << "arrival_s=" << num(c.arrival_s) << "\n"
    << "neighbor_timeout_s=" << num(c.neighbor_timeout_s) << "\n"
    << "max_backoff_slots=" << c.max_backoff_slots << "\n"
    << "theta_window_slots=" << c.theta_window_slots << "\n"
    << "radius_km=" << num(c.radio.radius_km) << "\n"
    << "radios=" << c.radio.radios << "\n"
    << "data_channels=" << c.radio.data_channels << "\n"
    << "data_rate_bps=" << num(c.radio.data_rate_bps) << "\n"
    << "control_rate_bps=" << num(c.radio.control_rate_bps) << "\n"
    << "ack_bits=" << num(c.radio.ack_bits) << "\n"
    << "bandwidth_bps=" << num(c.radio.bandwidth_bps) << "\n"
    << "protocol=" << to_string(c.protocol) << "\n"
    << "epsilon=" << num(c.params.epsilon) << "\n"
    << "retx_max=" << c.params.retx_max << "\n"
    << "c_min=" << num(c.params.c_min) << "\n"
    << "theta_mode=" << (c.params.theta_mode == ThetaMode::literal ? "literal" : "linear")
    << "\n"
    << "alpha=" << num(c.params.model.alpha) << "\n"
    << "beta=" << num(c.params.model.beta) << "\n"
    << "gamma=" << num(c.params.model.gamma) << "\n"
    << "ell_min=" << num(c.params.model.ell_min) << "\n"
    << "log_beacons=" << (c.log_beacons ? "on" : "off") << "\n";
  return o.str();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const TrialConfig& cfg) {
  std::string text = serialize_trial_config(cfg);
  for (const auto& p : cfg.positions) text += "pos=" + num(p.x) + "," + num(p.y) + "\n";
  for (const auto& f : cfg.flows) {
    text += "flow=" + std::to_string(f.id) + "," + std::to_string(f.src) + "," +
            std::to_string(f.dst) + "," + num(f.size_bits) + "," + num(f.packet_bits) + "," +
            num(f.capacity_req) + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

std::string provenance(const TrialConfig& cfg) {
  return "qfgeo " + std::string(kVersion) + " config=" + config_hash(cfg) +
         " seed=" + std::to_string(cfg.seed);
}

}  // namespace qfgeo
