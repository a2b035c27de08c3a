#include "ttnring/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ttnring {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": " + s);
  }
}

int to_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": " + s);
  }
}

}  // namespace

AnalysisWindow RunConfig::effective_window() const {
  AnalysisWindow w = window;
  if (w.t1 < 0) w.t1 = sched.t0();
  if (w.t2 < 0) w.t2 = t_end();
  return w;
}

void RunConfig::validate() const {
  try {
    params.validate();
    sched.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (tdvp.dt <= 0) throw ConfigError("time_step must be positive");
  if (tdvp.max_bond < 1) throw ConfigError("max_bond must be positive");
  if (tdvp.measure_stride < 1) throw ConfigError("measure_stride must be positive");
  if (hold_time < 0) throw ConfigError("hold_time must be nonnegative");
  const AnalysisWindow w = effective_window();
  if (!(w.t2 > w.t1)) throw ConfigError("analysis window is empty");
}

double parse_angle(const std::string& s) {
  const std::string v = trim(s);
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    const std::string pre = trim(v.substr(0, v.size() - 2));
    if (pre.empty()) return M_PI;
    if (pre == "-") return -M_PI;
    return to_double("angle", pre) * M_PI;
  }
  return to_double("angle", v);
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "sites")
    cfg.params.L = to_int(key, value);
  else if (key == "local_dim")
    cfg.params.d = to_int(key, value);
  else if (key == "particles")
    cfg.params.N = to_int(key, value);
  else if (key == "hopping")
    cfg.params.J = to_double(key, value);
  else if (key == "interaction")
    cfg.params.U = to_double(key, value);
  else if (key == "flux") {
    try {
      cfg.params.phi = parse_angle(value);
    } catch (const ConfigError&) {
      throw ConfigError("bad value for flux: " + value);
    }
  } else if (key == "u_initial")
    cfg.sched.u_i = to_double(key, value);
  else if (key == "u_final")
    cfg.sched.u_f = to_double(key, value);
  else if (key == "ramp_rate")
    cfg.sched.gamma = to_double(key, value);
  else if (key == "time_step")
    cfg.tdvp.dt = to_double(key, value);
  else if (key == "max_bond") {
    cfg.tdvp.max_bond = to_int(key, value);
    cfg.gs.max_bond = cfg.tdvp.max_bond;
  } else if (key == "svd_threshold") {
    cfg.tdvp.rel_threshold = to_double(key, value);
    cfg.gs.rel_threshold = cfg.tdvp.rel_threshold;
  } else if (key == "krylov_tol")
    cfg.tdvp.krylov_tol = to_double(key, value);
  else if (key == "measure_stride")
    cfg.tdvp.measure_stride = to_int(key, value);
  else if (key == "hold_time")
    cfg.hold_time = to_double(key, value);
  else if (key == "gs_energy_tol")
    cfg.gs.energy_tol = to_double(key, value);
  else if (key == "gs_max_sweeps")
    cfg.gs.max_sweeps = to_int(key, value);
  else if (key == "gs_krylov_tol")
    cfg.gs.krylov_tol = to_double(key, value);
  else if (key == "window_start")
    cfg.window.t1 = to_double(key, value);
  else if (key == "window_end")
    cfg.window.t2 = to_double(key, value);
  else
    throw ConfigError("unknown key: " + key);
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_key(base, key, value);
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace ttnring
