#pragma once

// Plain-text outputs: tab-separated tables with one header line and
// key/value summaries.  Doubles are written with %.17g so files round-trip
// exactly.

#include <string>
#include <utility>
#include <vector>

#include "ttnring/exact.hpp"
#include "ttnring/groundstate.hpp"
#include "ttnring/tdvp.hpp"

namespace ttnring {

std::string fmt_g17(double v);

// Columns: t U I_total I_1 .. I_L energy norm max_D discarded_weight.
void write_time_series(const std::string& path, const TimeSeries& ts);
TimeSeries read_time_series(const std::string& path);

using KvList = std::vector<std::pair<std::string, std::string>>;
void write_kv(const std::string& path, const KvList& kv);
KvList read_kv(const std::string& path);

// Columns: U energy current max_D sweeps converged.
void write_ground_curve(const std::string& path, const std::vector<GroundPoint>& pts);

// Columns: k energy tau_re tau_im.
void write_spectrum(const std::string& path, const SpectrumResult& spec);

}  // namespace ttnring
