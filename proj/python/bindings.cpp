#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "optocool/cli.hpp"
#include "optocool/config.hpp"
#include "optocool/depletion.hpp"
#include "optocool/errors.hpp"
#include "optocool/langevin.hpp"
#include "optocool/moments.hpp"
#include "optocool/spectrum.hpp"
#include "optocool/steady.hpp"

namespace py = pybind11;
using namespace optocool;

namespace {

SystemParams make_params(double omega_b_hz, double gamma_m_hz, double gamma_o_hz, double gain_total,
                         std::optional<double> gain_intrinsic, double length, double refractive_index,
                         double temperature, const std::string& convention) {
    SystemSpec spec;
    spec.omega_b_hz = omega_b_hz;
    spec.gamma_m_hz = gamma_m_hz;
    spec.gamma_o_hz = gamma_o_hz;
    spec.gain_total = gain_total;
    spec.gain_intrinsic = gain_intrinsic;
    spec.length = length;
    spec.refractive_index = refractive_index;
    spec.temperature = temperature;
    const auto parsed = parse_rates_convention(convention);
    if (!parsed) throw DomainError("convention must be 'as_given' or 'angular'");
    spec.convention = *parsed;
    return make_system_params(spec);
}

py::dict state_dict(const MomentState& s) {
    py::dict d;
    d["n_a"] = s.n_a;
    d["n_b"] = s.n_b;
    d["coherence"] = s.coherence;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Brillouin anti-Stokes cooling: closed forms, moments, Langevin, spectra, depletion";
    m.attr("__version__") = std::string(kVersion);

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega_b_hz, double gamma_m_hz, double gamma_o_hz, double gain_total,
                         std::optional<double> gain_intrinsic, double length, double refractive_index,
                         double temperature, const std::string& convention) {
                 return make_params(omega_b_hz, gamma_m_hz, gamma_o_hz, gain_total, gain_intrinsic, length,
                                    refractive_index, temperature, convention);
             }),
             py::arg("omega_b_hz") = 7.38e9, py::arg("gamma_m_hz") = 46.8e6, py::arg("gamma_o_hz") = 364e6,
             py::arg("gain_total") = 164.0, py::arg("gain_intrinsic") = 1.32e-9, py::arg("length") = 0.5,
             py::arg("refractive_index") = 2.5, py::arg("temperature") = 293.0,
             py::arg("convention") = "as_given")
        .def_readonly("omega_b_hz", &SystemParams::omega_b_hz)
        .def_readonly("gamma_m", &SystemParams::gamma_m)
        .def_readonly("gamma_o", &SystemParams::gamma_o)
        .def_readonly("gain_total", &SystemParams::gain_total)
        .def_readonly("gain_intrinsic", &SystemParams::gain_intrinsic)
        .def_readonly("length", &SystemParams::length)
        .def_readonly("refractive_index", &SystemParams::refractive_index)
        .def_readonly("temperature", &SystemParams::temperature)
        .def_property_readonly("convention", [](const SystemParams& p) { return std::string(to_string(p.convention)); })
        .def("rate_factor", &SystemParams::rate_factor)
        .def("__repr__", [](const SystemParams& p) {
            std::ostringstream s;
            s << "SystemParams(omega_b_hz=" << p.omega_b_hz << ", gamma_m=" << p.gamma_m
              << ", gamma_o=" << p.gamma_o << ", temperature=" << p.temperature << ", convention='"
              << to_string(p.convention) << "')";
            return s.str();
        });

    py::class_<Detuning>(m, "Detuning")
        .def(py::init<double, double>(), py::arg("delta1") = 0.0, py::arg("delta2") = 0.0)
        .def_readwrite("delta1", &Detuning::delta1)
        .def_readwrite("delta2", &Detuning::delta2)
        .def("mismatch", &Detuning::mismatch);

    m.def("bose_einstein_occupation", &bose_einstein_occupation, py::arg("omega_hz"), py::arg("temperature"));
    m.def("effective_temperature", &effective_temperature, py::arg("occupation"), py::arg("omega_hz"));
    m.def("thermal_occupation", &thermal_occupation, py::arg("params"));
    m.def("coupling_strength", py::overload_cast<const SystemParams&, double>(&coupling_strength),
          py::arg("params"), py::arg("power"));
    m.def("pump_power_for_coupling", &pump_power_for_coupling, py::arg("params"), py::arg("g_om"));

    m.def("phonon_occupation_phase_matched", &phonon_occupation_phase_matched, py::arg("params"),
          py::arg("g_om"));
    m.def("phonon_occupation_detuned", &phonon_occupation_detuned, py::arg("params"), py::arg("g_om"),
          py::arg("det"));
    m.def("effective_linewidth", &effective_linewidth, py::arg("params"), py::arg("g_om"));
    m.def("cooling_rate", &cooling_rate, py::arg("params"), py::arg("g_om"));
    m.def("occupation_floor", &occupation_floor, py::arg("params"));
    m.def("cooling_rate_floor", &cooling_rate_floor, py::arg("params"));
    m.def("linewidth_limit", &linewidth_limit, py::arg("params"));
    m.def("pump_power_for_occupation", &pump_power_for_occupation, py::arg("params"),
          py::arg("target_occupation"));

    m.def(
        "settle", [](const SystemParams& p, double g, const Detuning& det) { return state_dict(settle(p, g, det)); },
        py::arg("params"), py::arg("g_om"), py::arg("det") = Detuning{});
    m.def(
        "integrate",
        [](const SystemParams& p, double g, const Detuning& det, double t_end, double tol) {
            const Trajectory traj = integrate(thermal_state(p), p, g, det, t_end, tol);
            std::vector<double> t, n_a, n_b;
            for (const auto& s : traj.samples) {
                t.push_back(s.t);
                n_a.push_back(s.state.n_a);
                n_b.push_back(s.state.n_b);
            }
            py::dict d;
            d["t"] = t;
            d["n_a"] = n_a;
            d["n_b"] = n_b;
            d["final"] = state_dict(traj.final_state());
            return d;
        },
        py::arg("params"), py::arg("g_om"), py::arg("det") = Detuning{}, py::arg("t_end"),
        py::arg("tol") = 1e-10, "Moment equations integrated from the thermal state.");

    m.def("max_langevin_step", &max_langevin_step, py::arg("params"), py::arg("g_om"),
          py::arg("det") = Detuning{});
    m.def("min_langevin_duration", &min_langevin_duration, py::arg("params"));
    m.def(
        "run_ensemble",
        [](const SystemParams& p, double g, const Detuning& det, double n_th, double t_end, double dt, int count,
           std::uint64_t base_seed, unsigned threads) {
            EnsembleOptions opts;
            opts.threads = threads;
            TrajectoryEnsemble ens;
            {
                py::gil_scoped_release release;
                ens = run_ensemble(p, g, det, NoiseSpec{n_th}, t_end, dt, count, base_seed, opts);
            }
            py::dict d;
            d["mean"] = ens.phonons.mean;
            d["standard_error"] = ens.phonons.standard_error;
            d["photon_mean"] = ens.photons.mean;
            d["count"] = ens.count;
            d["per_trajectory"] = ens.mean_phonons;
            return d;
        },
        py::arg("params"), py::arg("g_om"), py::arg("det"), py::arg("n_th"), py::arg("t_end"), py::arg("dt"),
        py::arg("count"), py::arg("base_seed"), py::arg("threads") = 0);

    m.def(
        "acoustic_psd",
        [](const SystemParams& p, double g, const Detuning& det, int points, double span_factor) {
            const SpectrumTrace t = acoustic_psd(p, g, det, default_grid(p, det, GridOptions{points, span_factor}));
            return py::make_tuple(t.offsets, t.psd);
        },
        py::arg("params"), py::arg("g_om"), py::arg("det") = Detuning{}, py::arg("points") = 4096,
        py::arg("span_factor") = 20.0, "Returns (offsets, psd) on the default grid around -delta2.");
    m.def(
        "fit_lorentzian",
        [](std::vector<double> offsets, std::vector<double> psd) {
            SpectrumTrace t;
            t.offsets = std::move(offsets);
            t.psd = std::move(psd);
            const LorentzianFit f = fit_lorentzian(t);
            py::dict d;
            d["center"] = f.center;
            d["fwhm"] = f.fwhm;
            d["height"] = f.height;
            d["residual_norm"] = f.residual_norm;
            d["iterations"] = f.iterations;
            return d;
        },
        py::arg("offsets"), py::arg("psd"));
    m.def("anti_stokes_peak_height", &anti_stokes_peak_height, py::arg("params"), py::arg("g_om"));

    m.def("small_signal_gain", &small_signal_gain, py::arg("params"), py::arg("pump_in"));
    m.def(
        "propagate",
        [](const SystemParams& p, double pump_in, double seed, int steps, double loss_per_m) {
            PropagationOptions o;
            o.steps = steps;
            o.loss_per_m = loss_per_m;
            const PropagationProfile prof = propagate(p, pump_in, seed, o);
            py::dict d;
            d["z"] = prof.z;
            d["pump"] = prof.pump;
            d["stokes"] = prof.stokes;
            d["depletion_fraction"] = prof.depletion_fraction();
            d["mean_pump"] = prof.mean_pump();
            return d;
        },
        py::arg("params"), py::arg("pump_in"), py::arg("stokes_seed"), py::arg("steps") = 2000,
        py::arg("loss_per_m") = 0.0);
    m.def(
        "depletion_threshold",
        [](const SystemParams& p, double seed, double fraction, double max_power) {
            return depletion_threshold(p, seed, fraction, max_power);
        },
        py::arg("params"), py::arg("stokes_seed"), py::arg("depletion_fraction"), py::arg("max_power"));
    m.def("seed_for_threshold_exponent", &seed_for_threshold_exponent, py::arg("params"), py::arg("exponent"),
          py::arg("depletion_fraction"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in process; returns (exit code, stdout, stderr).");

}
