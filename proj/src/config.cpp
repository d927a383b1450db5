#include "quadsmc/config.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "quadsmc/csvio.hpp"

namespace quadsmc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": empty key");
    }
    if (!section.empty() && key.find('.') == std::string::npos) {
      key = section + "." + key;
    }
    c.set(key, value, lineno);
  }
  return c;
}

Config Config::parse_json(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");
  Config c;
  c.origin_ = origin;
  const auto scalar = [&](const nlohmann::json& v,
                          const std::string& key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += nlohmann::json(v[i]).dump();
      }
      return out;
    }
    if (v.is_object()) {
      throw ConfigError(origin + ": nesting deeper than one section at '" +
                        key + "'");
    }
    return v.dump();
  };
  for (const auto& [sec, val] : j.items()) {
    if (val.is_object()) {
      for (const auto& [key, v] : val.items()) {
        c.set(sec + "." + key, scalar(v, sec + "." + key));
      }
    } else {
      c.set(sec, scalar(val, sec));
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return parse_json(text, path);
  }
  return parse(text, path);
}

void Config::set(const std::string& key, const std::string& value, int line) {
  values_[key] = value;
  lines_[key] = line;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like section.key=value, got '" +
                      assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::where(const std::string& key) const {
  const auto it = lines_.find(key);
  const int line = it == lines_.end() ? 0 : it->second;
  return origin_ + (line > 0 ? ":" + std::to_string(line) : "") + ": field '" +
         key + "'";
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (trim(it->second.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(where(key) + ": expected a number, got '" + it->second +
                    "'");
}

int Config::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  const int i = static_cast<int>(v);
  if (i != v) {
    throw ConfigError(where(key) + ": expected an integer");
  }
  return i;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where(key) + ": expected a boolean, got '" + v + "'");
}

Vec3 Config::get_vec3(const std::string& key, const Vec3& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> parts;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (!trim(tok.substr(pos)).empty()) throw std::invalid_argument(tok);
      parts.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(where(key) + ": expected numbers, got '" + tok + "'");
    }
  }
  if (parts.size() == 1) return Vec3::Constant(parts[0]);
  if (parts.size() == 3) return Vec3(parts[0], parts[1], parts[2]);
  throw ConfigError(where(key) + ": expected 1 or 3 comma-separated numbers");
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::snapshot() const {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, value] : values_) {  // std::map: already sorted
    const auto dot = key.rfind('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      os << "[" << sec << "]\n";
      section = sec;
    }
    os << leaf << " = " << value << "\n";
  }
  return os.str();
}

void Config::check_known(const std::vector<std::string>& known) const {
  for (const auto& [key, _] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(where(key) + ": unknown field");
    }
  }
}

void apply_config(const Config& c, VehicleParams* vp, SimConfig* sim,
                  ControllerGains* g, DisturbanceModel* dist) {
  static const std::vector<std::string> known = {
      "vehicle.m", "vehicle.m_hat", "vehicle.J", "vehicle.J_hat",
      "vehicle.c_t", "vehicle.c_q", "vehicle.l", "vehicle.beta",
      "vehicle.omega_rotor_max",
      "sim.dt_physics", "sim.duration", "sim.attitude_every",
      "sim.position_every", "sim.crash_threshold", "sim.record_stride",
      "sim.record_trace",
      "wind.speed", "wind.c_d", "wind.gated", "wind.center", "wind.radius",
      "disturbance.d_a", "disturbance.d_alpha", "disturbance.d_alpha_step",
      "disturbance.step_on", "disturbance.step_off",
      "attitude.Lambda_q", "attitude.K_q", "attitude.phi_q", "attitude.pi_q",
      "position.Lambda_xi", "position.K_xi", "position.phi_xi",
      "position.pi_xi", "position.kappa_floor",
      "adapt_q.Gamma", "adapt_q.epsilon", "adapt_q.mu", "adapt_q.K_th",
      "adapt_xi.Gamma", "adapt_xi.epsilon", "adapt_xi.mu", "adapt_xi.K_th",
      "init.K_q0", "init.K_xi0",
      "esmc.K_eta", "esmc.Lambda_eta", "esmc.phi_eta", "esmc.K_xi",
      "esmc.Lambda_xi", "esmc.phi_xi",
      "gtc.K_R", "gtc.K_omega", "gtc.K_xi", "gtc.K_nu",
      "qpd.K_P", "qpd.K_D",
      "qpd_position.Lambda_xi", "qpd_position.K_xi", "qpd_position.phi_xi",
  };
  c.check_known(known);

  if (vp) {
    vp->m = c.get_double("vehicle.m", vp->m);
    vp->m_hat = c.get_double("vehicle.m_hat", vp->m_hat);
    vp->J_diag = c.get_vec3("vehicle.J", vp->J_diag);
    vp->J_hat_diag = c.get_vec3("vehicle.J_hat", vp->J_hat_diag);
    vp->c_t = c.get_double("vehicle.c_t", vp->c_t);
    vp->c_q = c.get_double("vehicle.c_q", vp->c_q);
    vp->l = c.get_double("vehicle.l", vp->l);
    vp->beta = c.get_double("vehicle.beta", vp->beta);
    vp->omega_rotor_max =
        c.get_double("vehicle.omega_rotor_max", vp->omega_rotor_max);
    try {
      vp->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("vehicle config invalid: ") + e.what());
    }
  }
  if (sim) {
    sim->dt_physics = c.get_double("sim.dt_physics", sim->dt_physics);
    sim->duration = c.get_double("sim.duration", sim->duration);
    sim->attitude_every = c.get_int("sim.attitude_every", sim->attitude_every);
    sim->position_every = c.get_int("sim.position_every", sim->position_every);
    sim->crash_threshold =
        c.get_double("sim.crash_threshold", sim->crash_threshold);
    sim->record_stride = c.get_int("sim.record_stride", sim->record_stride);
    sim->record_trace = c.get_bool("sim.record_trace", sim->record_trace);
    try {
      sim->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("sim config invalid: ") + e.what());
    }
  }
  if (dist) {
    dist->wind = c.get_vec3("wind.speed", dist->wind);
    dist->c_d = c.get_vec3("wind.c_d", dist->c_d);
    dist->wind_gated = c.get_bool("wind.gated", dist->wind_gated);
    dist->gate_center = c.get_vec3("wind.center", dist->gate_center);
    dist->gate_radius = c.get_double("wind.radius", dist->gate_radius);
    dist->d_a_const = c.get_vec3("disturbance.d_a", dist->d_a_const);
    dist->d_alpha_const = c.get_vec3("disturbance.d_alpha", dist->d_alpha_const);
    dist->d_alpha_step =
        c.get_vec3("disturbance.d_alpha_step", dist->d_alpha_step);
    dist->step_on = c.get_double("disturbance.step_on", dist->step_on);
    dist->step_off = c.get_double("disturbance.step_off", dist->step_off);
  }
  if (g) {
    g->attitude.Lambda_q = c.get_vec3("attitude.Lambda_q", g->attitude.Lambda_q);
    g->attitude.K_q = c.get_vec3("attitude.K_q", g->attitude.K_q);
    g->attitude.phi_q = c.get_vec3("attitude.phi_q", g->attitude.phi_q);
    g->attitude.pi_q = c.get_vec3("attitude.pi_q", g->attitude.pi_q);
    g->position.Lambda_xi =
        c.get_vec3("position.Lambda_xi", g->position.Lambda_xi);
    g->position.K_xi = c.get_vec3("position.K_xi", g->position.K_xi);
    g->position.phi_xi = c.get_vec3("position.phi_xi", g->position.phi_xi);
    g->position.pi_xi = c.get_vec3("position.pi_xi", g->position.pi_xi);
    g->position.kappa_floor =
        c.get_double("position.kappa_floor", g->position.kappa_floor);
    g->adapt_q.Gamma = c.get_vec3("adapt_q.Gamma", g->adapt_q.Gamma);
    g->adapt_q.epsilon = c.get_vec3("adapt_q.epsilon", g->adapt_q.epsilon);
    g->adapt_q.mu = c.get_vec3("adapt_q.mu", g->adapt_q.mu);
    g->adapt_q.K_th = c.get_vec3("adapt_q.K_th", g->adapt_q.K_th);
    g->adapt_xi.Gamma = c.get_vec3("adapt_xi.Gamma", g->adapt_xi.Gamma);
    g->adapt_xi.epsilon = c.get_vec3("adapt_xi.epsilon", g->adapt_xi.epsilon);
    g->adapt_xi.mu = c.get_vec3("adapt_xi.mu", g->adapt_xi.mu);
    g->adapt_xi.K_th = c.get_vec3("adapt_xi.K_th", g->adapt_xi.K_th);
    g->K_q0 = c.get_vec3("init.K_q0", g->K_q0);
    g->K_xi0 = c.get_vec3("init.K_xi0", g->K_xi0);
    g->esmc.K_eta = c.get_vec3("esmc.K_eta", g->esmc.K_eta);
    g->esmc.Lambda_eta = c.get_vec3("esmc.Lambda_eta", g->esmc.Lambda_eta);
    g->esmc.phi_eta = c.get_vec3("esmc.phi_eta", g->esmc.phi_eta);
    g->esmc.K_xi = c.get_vec3("esmc.K_xi", g->esmc.K_xi);
    g->esmc.Lambda_xi = c.get_vec3("esmc.Lambda_xi", g->esmc.Lambda_xi);
    g->esmc.phi_xi = c.get_vec3("esmc.phi_xi", g->esmc.phi_xi);
    g->gtc.K_R = c.get_vec3("gtc.K_R", g->gtc.K_R);
    g->gtc.K_omega = c.get_vec3("gtc.K_omega", g->gtc.K_omega);
    g->gtc.K_xi = c.get_vec3("gtc.K_xi", g->gtc.K_xi);
    g->gtc.K_nu = c.get_vec3("gtc.K_nu", g->gtc.K_nu);
    g->qpd.K_P = c.get_vec3("qpd.K_P", g->qpd.K_P);
    g->qpd.K_D = c.get_vec3("qpd.K_D", g->qpd.K_D);
    g->qpd.position.Lambda_xi =
        c.get_vec3("qpd_position.Lambda_xi", g->qpd.position.Lambda_xi);
    g->qpd.position.K_xi =
        c.get_vec3("qpd_position.K_xi", g->qpd.position.K_xi);
    g->qpd.position.phi_xi =
        c.get_vec3("qpd_position.phi_xi", g->qpd.position.phi_xi);
  }
}

std::string make_manifest(const std::string& command,
                          const std::string& config_path, const Config& config,
                          std::uint64_t seed, const std::string& out_dir) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config_path"] = config_path;
  j["config_snapshot"] = config.snapshot();
  j["seed"] = seed;
  j["output_directory"] = out_dir;
  return j.dump(2) + "\n";
}

}  // namespace quadsmc
