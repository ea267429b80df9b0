#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tmsq/analysis.hpp"
#include "tmsq/config.hpp"
#include "tmsq/model.hpp"

namespace py = pybind11;
using namespace tmsq;

namespace {

SystemParams make_params(double g, double G, double r, double delta_c, double delta_a,
                         double alpha, double phi) {
    SystemParams p;
    p.g = g;
    p.G = G;
    p.r = r;
    p.delta_c = delta_c;
    p.delta_a = delta_a;
    p.alpha = alpha;
    p.phi = phi;
    return p;
}

py::dict traj_to_dict(const CovarianceTrajectory& traj, double phi) {
    auto recs = squeezing_records(traj, phi);
    py::list t, dx, dy, dx_opt, dy_opt, s_db, s_opt_db;
    for (const auto& r : recs) {
        t.append(r.t);
        dx.append(r.dx);
        dy.append(r.dy);
        dx_opt.append(r.dx_opt);
        dy_opt.append(r.dy_opt);
        s_db.append(r.s_db);
        s_opt_db.append(r.s_opt_db);
    }
    py::dict d;
    d["t"] = t;
    d["dX"] = dx;
    d["dY"] = dy;
    d["dX_opt"] = dx_opt;
    d["dY_opt"] = dy_opt;
    d["S_dB"] = s_db;
    d["S_opt_dB"] = s_opt_db;
    return d;
}

}  // namespace

PYBIND11_MODULE(tmsq, m) {
    m.doc() = "Optical-microwave two-mode squeezing dynamics under Markovian and "
              "Lorentzian reservoirs";

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init(&make_params), py::arg("g") = 0.15, py::arg("G") = 0.15,
             py::arg("r") = 0.2, py::arg("delta_c") = 3.5,
             py::arg("delta_a") = std::numeric_limits<double>::quiet_NaN(),
             py::arg("alpha") = 0.0, py::arg("phi") = 0.0)
        .def_readwrite("g", &SystemParams::g)
        .def_readwrite("G", &SystemParams::G)
        .def_readwrite("r", &SystemParams::r)
        .def_readwrite("delta_c", &SystemParams::delta_c)
        .def_readwrite("delta_a", &SystemParams::delta_a)
        .def_readwrite("alpha", &SystemParams::alpha)
        .def_readwrite("phi", &SystemParams::phi);

    py::class_<LorentzianBath>(m, "LorentzianBath")
        .def(py::init([](double gamma, double lambda, double n_bar, const std::string& label) {
                 LorentzianBath b;
                 b.gamma = gamma;
                 b.lambda = lambda;
                 b.n_bar = n_bar;
                 b.label = label == "microwave" ? BathMode::microwave : BathMode::optical;
                 b.validate();
                 return b;
             }),
             py::arg("gamma") = 1e-3, py::arg("lambda_") = 1e-2, py::arg("n_bar") = 0.0,
             py::arg("label") = "optical")
        .def_readwrite("gamma", &LorentzianBath::gamma)
        .def_readwrite("lambda_", &LorentzianBath::lambda)
        .def_readwrite("n_bar", &LorentzianBath::n_bar);

    m.def("effective_coupling", &effective_coupling, py::arg("params"));
    m.def("energy_shift", &energy_shift, py::arg("params"));
    m.def("resolved_delta_a", &resolved_delta_a, py::arg("params"));
    m.def("mpa_frame", [](double Delta_b, double Omega_b) {
        MpaFrame f = mpa_frame(Delta_b, Omega_b);
        return py::make_tuple(f.r, f.tilde_omega_b);
    }, py::arg("Delta_b"), py::arg("Omega_b"));
    m.def("validity_check", [](const SystemParams& p, double thresh) {
        ValidityReport rep = validity_check(p, thresh);
        py::dict d;
        d["coupling_range"] = rep.coupling_range.pass;
        d["mpa_range"] = rep.mpa_range.pass;
        d["large_detuning"] = rep.large_detuning.pass;
        d["detuning_ratio"] = rep.detuning_ratio;
        d["all_pass"] = rep.all_pass();
        return d;
    }, py::arg("params"), py::arg("ratio_threshold") = 10.0);

    m.def("transition_matrix",
          [](const SystemParams& p, double da) { return Eigen::MatrixXd(transition_matrix(p, da)); },
          py::arg("params"), py::arg("delta_a"));
    m.def("eigen_splitting", [](const SystemParams& p) {
        EigenSplitting es = eigen_splitting(p, default_delta_a_grid(p.delta_c));
        py::dict d;
        d["g_eff_num"] = es.g_eff_num;
        d["delta_num"] = es.delta_num;
        d["delta_a"] = es.delta_a;
        d["branch_hi"] = es.branch_hi;
        d["branch_lo"] = es.branch_lo;
        return d;
    }, py::arg("params"));

    m.def("spectral_density", &spectral_density, py::arg("bath"), py::arg("detuning"));
    m.def("memory_kernel", &memory_kernel, py::arg("bath"), py::arg("t"));
    m.def("markovian_rate", &markovian_rate, py::arg("bath"));
    m.def("thermal_occupation", &thermal_occupation, py::arg("freq_over_temp"));

    m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("cm"));
    m.def("analytic_variance", &analytic_variance, py::arg("g_eff"), py::arg("kappa_a"),
          py::arg("kappa_c"), py::arg("N_a"), py::arg("N_c"), py::arg("t"));
    m.def("optimal_angle", &optimal_angle, py::arg("g_eff"), py::arg("kappa_a"),
          py::arg("kappa_c"));
    m.def("squeezing_level", &squeezing_level, py::arg("dx"));

    m.def("markov_trajectory",
          [](const SystemParams& p, const LorentzianBath& ba, const LorentzianBath& bc,
             double t_max, double dt, std::optional<double> tau_off) {
              double g_eff = effective_coupling(p);
              double ka = markovian_rate(ba), kc = markovian_rate(bc);
              MarkovModel mm{g_eff, ka, kc, ba.n_bar, bc.n_bar};
              TimeGrid grid = TimeGrid::from_span(t_max, dt);
              DriveSchedule sched{tau_off};
              long stride = std::max<long>(1, std::lround(0.1 / dt));
              auto traj = propagate_cm(mm, Eigen::Matrix4d(vacuum_cm(4)), grid, stride, sched);
              return traj_to_dict(traj, optimal_angle(g_eff, ka, kc));
          },
          py::arg("params"), py::arg("bath_a"), py::arg("bath_c"), py::arg("t_max") = 300.0,
          py::arg("dt") = 0.01, py::arg("tau_off") = py::none());

    m.def("nmhl_trajectory",
          [](const SystemParams& p, const LorentzianBath& ba, const LorentzianBath& bc,
             double t_max, double dt, std::optional<double> tau_off) {
              double g_eff = effective_coupling(p);
              double theta = p.alpha + p.phi;
              TimeGrid grid = TimeGrid::from_span(t_max, dt);
              DriveSchedule sched{tau_off};
              long stride = std::max<long>(1, std::lround(0.1 / dt));
              auto traj = nmhl_run(g_eff, theta, ba, bc, sched, grid, stride);
              return traj_to_dict(traj, optimal_angle(g_eff, markovian_rate(ba),
                                                      markovian_rate(bc)));
          },
          py::arg("params"), py::arg("bath_a"), py::arg("bath_c"), py::arg("t_max") = 300.0,
          py::arg("dt") = 0.01, py::arg("tau_off") = py::none());
}
