#include "ttnring/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ttnring {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw StructuralError("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw StructuralError("cannot open for reading: " + path);
  return is;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw StructuralError("bad numeric field: " + s);
}

}  // namespace

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_time_series(const std::string& path, const TimeSeries& ts) {
  auto os = open_out(path);
  os << "t\tU\tI_total";
  for (int k = 1; k <= ts.n_sites; ++k) os << "\tI_" << k;
  os << "\tenergy\tnorm\tmax_D\tdiscarded_weight\n";
  for (std::size_t r = 0; r < ts.rows(); ++r) {
    os << fmt_g17(ts.t[r]) << '\t' << fmt_g17(ts.u[r]) << '\t' << fmt_g17(ts.i_total[r]);
    for (double v : ts.i_local[r]) os << '\t' << fmt_g17(v);
    os << '\t' << fmt_g17(ts.energy[r]) << '\t' << fmt_g17(ts.norm[r]) << '\t'
       << ts.max_d[r] << '\t' << fmt_g17(ts.discarded[r]) << '\n';
  }
  if (!os) throw StructuralError("write failed: " + path);
}

TimeSeries read_time_series(const std::string& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw StructuralError("empty table: " + path);
  const auto head = split_ws(line);
  // fixed leading and trailing columns; the bond-current block sets L
  const int L = static_cast<int>(head.size()) - 7;
  if (L < 1 || head.size() < 8 || head[0] != "t" || head.back() != "discarded_weight")
    throw StructuralError("unrecognized table header: " + path);

  TimeSeries ts;
  ts.n_sites = L;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_ws(line);
    if (static_cast<int>(f.size()) != L + 7)
      throw StructuralError("bad row width in " + path);
    ts.t.push_back(parse_double(f[0]));
    ts.u.push_back(parse_double(f[1]));
    ts.i_total.push_back(parse_double(f[2]));
    std::vector<double> ik(L);
    for (int k = 0; k < L; ++k) ik[k] = parse_double(f[3 + k]);
    ts.i_local.push_back(std::move(ik));
    ts.energy.push_back(parse_double(f[3 + L]));
    ts.norm.push_back(parse_double(f[4 + L]));
    ts.max_d.push_back(static_cast<int>(parse_double(f[5 + L])));
    ts.discarded.push_back(parse_double(f[6 + L]));
  }
  return ts;
}

void write_kv(const std::string& path, const KvList& kv) {
  auto os = open_out(path);
  for (const auto& p : kv) os << p.first << '\t' << p.second << '\n';
  if (!os) throw StructuralError("write failed: " + path);
}

KvList read_kv(const std::string& path) {
  auto is = open_in(path);
  KvList out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw StructuralError("bad key/value line: " + line);
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

void write_ground_curve(const std::string& path, const std::vector<GroundPoint>& pts) {
  auto os = open_out(path);
  os << "U\tenergy\tcurrent\tmax_D\tsweeps\tconverged\n";
  for (const auto& p : pts)
    os << fmt_g17(p.u) << '\t' << fmt_g17(p.energy) << '\t' << fmt_g17(p.current)
       << '\t' << p.max_d << '\t' << p.sweeps << '\t' << (p.converged ? 1 : 0) << '\n';
  if (!os) throw StructuralError("write failed: " + path);
}

void write_spectrum(const std::string& path, const SpectrumResult& spec) {
  auto os = open_out(path);
  os << "k\tenergy\ttau_re\ttau_im\n";
  for (int i = 0; i < spec.energies.size(); ++i)
    os << i << '\t' << fmt_g17(spec.energies[i]) << '\t' << fmt_g17(spec.tau[i].real())
       << '\t' << fmt_g17(spec.tau[i].imag()) << '\n';
  if (!os) throw StructuralError("write failed: " + path);
}

}  // namespace ttnring
