#pragma once

// Flat `key = value` run configuration.  `#` starts a comment, blank lines
// are skipped, unknown keys are rejected.  Angles accept a trailing `pi`
// (e.g. `flux = 0.7pi`).

#include <stdexcept>
#include <string>

#include "ttnring/analysis.hpp"
#include "ttnring/groundstate.hpp"
#include "ttnring/model.hpp"
#include "ttnring/tdvp.hpp"

namespace ttnring {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  BHParams params;
  AnnealSchedule sched;
  TdvpConfig tdvp;
  GsConfig gs;
  double hold_time = 15.0;              // evolution past the ramp end
  AnalysisWindow window{-1.0, -1.0};    // negative bounds: use the hold segment

  double t_end() const { return sched.t0() + hold_time; }
  AnalysisWindow effective_window() const;
  void validate() const;
};

// "0.7pi", "pi", "-0.5pi", or plain radians.
double parse_angle(const std::string& s);

// Applies one assignment; throws ConfigError on unknown keys or bad values.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config_text(const std::string& text, RunConfig base = RunConfig());
RunConfig load_config(const std::string& path, RunConfig base = RunConfig());

}  // namespace ttnring
