#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttnring/config.hpp"
#include "ttnring/environment.hpp"
#include "ttnring/exact.hpp"
#include "ttnring/groundstate.hpp"
#include "ttnring/perturb.hpp"
#include "ttnring/runner.hpp"

namespace py = pybind11;
using namespace ttnring;

namespace {

BHParams make_params(int L, int d, int N, double J, double phi) {
  BHParams p;
  p.L = L;
  p.d = d;
  p.N = N;
  p.J = J;
  p.phi = phi;
  p.validate();
  return p;
}

py::dict exact_ground(int L, int d, int N, double J, double u, double phi) {
  const BHParams p = make_params(L, d, N, J, phi);
  const SectorHamiltonian sh = build_sector_hamiltonian(p);
  const SpectrumResult spec = low_spectrum(sh.basis, sh.h(u), 1);
  const SparseMat imat = term_matrix(sh.basis, current_terms(p));
  const Eigen::VectorXcd g = spec.states.col(0);
  py::dict out;
  out["dim"] = sh.basis.dim();
  out["energy"] = spec.energies[0];
  out["current"] = std::real(g.dot(imat * g));
  return out;
}

py::dict exact_spectrum(int L, int d, int N, double J, double u, double phi, int k) {
  const BHParams p = make_params(L, d, N, J, phi);
  const SectorHamiltonian sh = build_sector_hamiltonian(p);
  const SpectrumResult spec =
      low_spectrum(sh.basis, sh.h(u), std::min<int>(k, static_cast<int>(sh.basis.dim())));
  std::vector<double> energies(spec.energies.data(), spec.energies.data() + spec.energies.size());
  std::vector<std::complex<double>> tau(spec.tau.data(), spec.tau.data() + spec.tau.size());
  py::dict out;
  out["energies"] = energies;
  out["tau"] = tau;
  return out;
}

py::dict perturb_gap(int L, double phi, double u) {
  const PerturbGap g = gap(L, phi, u);
  py::dict out;
  out["u"] = g.u;
  out["gap_first"] = g.delta1;
  out["gap_second"] = g.delta2;
  out["e11"] = g.e11;
  out["e02"] = g.e02;
  out["e12"] = g.e12;
  return out;
}

py::dict ttn_ground(int L, int d, int N, double J, double phi, double u, int max_bond,
                    double energy_tol, int max_sweeps) {
  const BHParams p = make_params(L, d, N, J, phi);
  GsConfig cfg;
  cfg.max_bond = max_bond;
  cfg.energy_tol = energy_tol;
  cfg.max_sweeps = max_sweeps;
  TTNState state = initial_state(p, cfg);
  const GsResult gs = find_ground_state(state, p, u, cfg);
  py::dict out;
  out["energy"] = gs.energy;
  out["current"] = expectation(state, current_terms(p));
  out["sweeps"] = gs.sweeps;
  out["converged"] = gs.converged;
  out["max_d"] = state.max_bond();
  return out;
}

py::dict anneal(const std::string& config_text) {
  const RunConfig cfg = parse_config_text(config_text);
  const AnnealOutcome res = run_anneal_pipeline(cfg);
  py::dict series;
  series["t"] = res.series.t;
  series["u"] = res.series.u;
  series["i_total"] = res.series.i_total;
  series["energy"] = res.series.energy;
  series["norm"] = res.series.norm;
  series["max_d"] = res.series.max_d;
  py::dict out;
  out["series"] = series;
  out["ground_energy_initial"] = res.e_ground_start;
  out["ground_current_initial"] = res.current_start;
  out["ground_energy_final"] = res.e_ground_final;
  out["energy_final"] = res.e_final;
  out["residual_energy"] = res.analysis.residual;
  out["i0"] = res.analysis.i0;
  out["omega"] = res.analysis.omega;
  out["local_spread"] = res.analysis.spread;
  out["window"] = py::make_tuple(res.analysis.window.t1, res.analysis.window.t2);
  return out;
}

}  // namespace

PYBIND11_MODULE(ttnring, m) {
  m.doc() = "Persistent-current annealing on a flux-pierced Bose-Hubbard ring";

  m.def("schedule_u",
        [](double u_i, double u_f, double gamma, double t) {
          AnnealSchedule s;
          s.u_i = u_i;
          s.u_f = u_f;
          s.gamma = gamma;
          s.validate();
          return schedule_u(s, t);
        },
        py::arg("u_i"), py::arg("u_f"), py::arg("gamma"), py::arg("t"));

  m.def("sector_dimension", &sector_dimension, py::arg("L"), py::arg("d"), py::arg("N"));

  m.def("exact_ground", &exact_ground, py::arg("L") = 8, py::arg("d") = 3, py::arg("N") = -1,
        py::arg("J") = 1.0, py::arg("u") = 2.0, py::arg("phi") = 0.0);

  m.def("exact_spectrum", &exact_spectrum, py::arg("L") = 8, py::arg("d") = 3,
        py::arg("N") = -1, py::arg("J") = 1.0, py::arg("u") = 2.0, py::arg("phi") = 0.0,
        py::arg("k") = 6);

  m.def("perturb_gap", &perturb_gap, py::arg("L"), py::arg("phi"), py::arg("u"));

  m.def("ttn_ground", &ttn_ground, py::arg("L") = 8, py::arg("d") = 3, py::arg("N") = -1,
        py::arg("J") = 1.0, py::arg("phi") = 0.0, py::arg("u") = 2.0,
        py::arg("max_bond") = 40, py::arg("energy_tol") = 1e-10, py::arg("max_sweeps") = 60);

  m.def("anneal", &anneal, py::arg("config_text"));

  py::register_exception<ConfigError>(m, "RingConfigError");
  py::register_exception<CapacityError>(m, "RingCapacityError");
  py::register_exception<NumericalError>(m, "RingNumericalError");
}
