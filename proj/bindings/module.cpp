// pybind11 bindings: the main turnplate operations with numpy matrices.

#include "turnplate/turnplate.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace turnplate;

namespace {

py::array_t<Complex> to_numpy(const ComplexMatrix& m) {
    const int n = m.dim();
    py::array_t<Complex> out({n, n});
    auto r = out.mutable_unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = m(i, j);
    return out;
}

ComplexMatrix from_numpy(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw py::value_error("expected a square matrix");
    const int n = static_cast<int>(a.shape(0));
    ComplexMatrix m(n);
    auto r = a.unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = r(i, j);
    return m;
}

using NumpyMatrix = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

py::dict fit_to_dict(const MatchingFit& fit) {
    py::dict d;
    d["epsilon"] = fit.epsilon;
    d["epsilon0"] = fit.epsilon0;
    d["z_values"] = fit.z_values;
    d["residual"] = fit.residual;
    d["tau"] = period(fit);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum state turnplate simulation: rings with complex couplings";

    py::register_exception<Error>(m, "TurnplateError");

    py::class_<Link>(m, "Link")
        .def(py::init<double, double>(), py::arg("mag"), py::arg("phase"))
        .def_readwrite("mag", &Link::mag)
        .def_readwrite("phase", &Link::phase);

    py::class_<RingSpec>(m, "RingSpec")
        .def(py::init([](int n_sites, const std::vector<std::pair<double, double>>& couplings) {
                 std::vector<Link> links;
                 for (const auto& [mag, phase] : couplings) links.push_back(Link{mag, phase});
                 return RingSpec(n_sites, std::move(links));
             }),
             py::arg("n_sites"), py::arg("couplings"))
        .def_static("uniform", &RingSpec::uniform, py::arg("n_sites"), py::arg("mag"),
                    py::arg("total_phase"))
        .def_static("from_json", &parse_spec)
        .def("to_json", &dump_spec)
        .def_property_readonly("n_sites", &RingSpec::n_sites)
        .def_property_readonly("couplings",
                               [](const RingSpec& s) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& link : s.links())
                                       out.emplace_back(link.mag, link.phase);
                                   return out;
                               })
        .def("conjugated", &RingSpec::conjugated);

    // ring
    m.def("build_hamiltonian", [](const RingSpec& s) { return to_numpy(build_hamiltonian(s)); });
    m.def("total_phase", &total_phase);
    m.def("gauge_normalize", [](const RingSpec& s) {
        auto [normalized, gauge] = gauge_normalize(s);
        return py::make_tuple(normalized, gauge.site_phases, gauge.phase_sum);
    });
    m.def("uniform_ring_spectrum", &uniform_ring_spectrum, py::arg("n_sites"), py::arg("mag"),
          py::arg("total_phase"));

    // numerics
    m.def("hermitian_eig", [](const NumpyMatrix& a) {
        const auto eig = hermitian_eig(from_numpy(a));
        return py::make_tuple(eig.values, to_numpy(eig.vectors));
    });
    m.def(
        "propagator",
        [](const NumpyMatrix& a, double t) {
            return to_numpy(propagator(from_numpy(a), t));
        },
        py::arg("m"), py::arg("t"));
    m.def("determinant", [](const NumpyMatrix& a) { return determinant(from_numpy(a)); });

    // symmetry
    m.def("detect_symmetry", [](const RingSpec& s) {
        const auto sym = detect_symmetry(s);
        return py::make_tuple(sym.n, sym.p);
    });
    m.def(
        "shift_operator",
        [](int n_sites, int step) { return to_numpy(shift_operator(n_sites, step).matrix); },
        py::arg("n_sites"), py::arg("step"));
    m.def("symmetry_projector", [](int n_sites, int step, int order, int label) {
        return to_numpy(symmetry_projector(n_sites, step, order, label));
    });
    m.def(
        "symmetry_labels",
        [](const RingSpec& spec, double cluster_tol) {
            const auto normalized = gauge_normalize(spec).first;
            const auto sym = detect_symmetry(normalized);
            const auto eig = hermitian_eig(build_hamiltonian(normalized));
            const auto labels = symmetry_labels(
                eig, shift_operator(spec.n_sites(), sym.p), sym.n, cluster_tol);
            return py::make_tuple(labels.values, labels.labels, to_numpy(labels.refined_vectors));
        },
        py::arg("spec"), py::arg("cluster_tol") = 1e-9);
    m.def("block_reduce", [](const RingSpec& spec) {
        const auto sym = detect_symmetry(spec);
        py::list out;
        for (const auto& block : block_reduce(spec, sym)) {
            py::dict d;
            d["l"] = block.label;
            d["total_phase"] = block.total_phase;
            d["spec"] = block.spec ? py::cast(*block.spec) : py::none();
            d["scalar"] = block.scalar ? py::cast(*block.scalar) : py::none();
            d["eigenvalues"] = block.spectrum();
            out.append(d);
        }
        return out;
    });
    m.def("char_poly_check", [](const RingSpec& spec) {
        const auto [det, predicted] = char_poly_check(spec);
        return py::make_tuple(det, predicted);
    });

    // matching
    m.def(
        "fit_matching",
        [](const std::vector<double>& values, const std::vector<int>& labels, int order,
           double tol, int z_max) -> py::object {
            const auto fit = fit_matching(values, labels, order, tol, z_max);
            if (!fit) return py::none();
            return fit_to_dict(*fit);
        },
        py::arg("values"), py::arg("labels"), py::arg("order"), py::arg("tol") = 1e-9,
        py::arg("z_max") = 10);
    m.def(
        "fit_spec",
        [](const RingSpec& spec, double tol, int z_max) -> py::object {
            const auto normalized = gauge_normalize(spec).first;
            const auto sym = detect_symmetry(normalized);
            const auto eig = hermitian_eig(build_hamiltonian(normalized));
            const auto labels =
                symmetry_labels(eig, shift_operator(spec.n_sites(), sym.p), sym.n);
            const auto fit = fit_matching(labels.values, labels.labels, sym.n, tol, z_max);
            if (!fit) return py::none();
            return fit_to_dict(*fit);
        },
        py::arg("spec"), py::arg("tol") = 1e-9, py::arg("z_max") = 10,
        "gauge-normalize, label and fit a ring spec in one call");

    // dynamics
    m.def(
        "evolve_state",
        [](const NumpyMatrix& h, const Vec& psi0, const std::vector<double>& times) {
            const auto states = evolve_state(from_numpy(h), psi0, times);
            const int n = static_cast<int>(psi0.size());
            py::array_t<Complex> out({static_cast<int>(times.size()), n});
            auto r = out.mutable_unchecked<2>();
            for (size_t s = 0; s < states.size(); ++s)
                for (int i = 0; i < n; ++i) r(s, i) = states[s][i];
            return out;
        },
        py::arg("h"), py::arg("psi0"), py::arg("times"));
    m.def(
        "probability_trace",
        [](const NumpyMatrix& h, const Vec& psi0, double t_max, int steps) {
            const auto trace = probability_trace(from_numpy(h), psi0, t_max, steps);
            return py::make_tuple(trace.times, trace.series);
        },
        py::arg("h"), py::arg("psi0"), py::arg("t_max"), py::arg("steps") = 2000);
    m.def(
        "transfer_matrix",
        [](const NumpyMatrix& h, double t) { return to_numpy(transfer_matrix(from_numpy(h), t).matrix); },
        py::arg("h"), py::arg("t"));
    m.def(
        "detect_transfer_time",
        [](const std::vector<double>& times, const std::vector<std::vector<double>>& series,
           int target_site, double threshold) -> py::object {
            TraceSeries trace{times, series};
            const auto t = detect_transfer_time(trace, target_site, threshold);
            if (!t) return py::none();
            return py::float_(*t);
        },
        py::arg("times"), py::arg("series"), py::arg("target_site"), py::arg("threshold"));

    // perturb
    m.def(
        "split_hamiltonian",
        [](const RingSpec& spec, const std::set<int>& weak_links) {
            auto [h0, v] = split_hamiltonian(spec, weak_links);
            return py::make_tuple(to_numpy(h0), to_numpy(v));
        },
        py::arg("spec"), py::arg("weak_links"));
    m.def("default_weak_links", &default_weak_links);
    m.def(
        "effective_hamiltonian",
        [](const RingSpec& spec, const std::set<int>& weak_links, double manifold_tol) {
            auto [h0, v] = split_hamiltonian(spec, weak_links);
            const auto manifold = zero_manifold(h0, manifold_tol);
            const auto eff = effective_hamiltonian(h0, v, manifold);
            py::dict d;
            d["manifold_sites"] = manifold.site_indices;
            d["matrix"] = to_numpy(eff.matrix);
            d["g"] = eff.g;
            d["phase"] = eff.phase;
            d["effective_spec"] = effective_ring_spec(eff);
            return d;
        },
        py::arg("spec"), py::arg("weak_links"), py::arg("manifold_tol") = 1e-8);
    m.def(
        "manifold_leakage",
        [](const RingSpec& spec, const std::set<int>& weak_links, const Vec& psi0, double t_max,
           int steps, double manifold_tol) {
            auto [h0, v] = split_hamiltonian(spec, weak_links);
            const auto manifold = zero_manifold(h0, manifold_tol);
            return manifold_leakage(build_hamiltonian(spec), manifold, psi0, t_max, steps);
        },
        py::arg("spec"), py::arg("weak_links"), py::arg("psi0"), py::arg("t_max"),
        py::arg("steps") = 2000, py::arg("manifold_tol") = 1e-8);

    // fock
    m.def(
        "fock_basis",
        [](int n_modes, int total_photons) { return FockBasis::build(n_modes, total_photons).states; },
        py::arg("n_modes"), py::arg("total_photons"));
    m.def("build_sector_hamiltonian",
          [](const RingSpec& spec, int n_photons) {
              return to_numpy(build_sector_hamiltonian(spec, n_photons));
          });
    m.def(
        "fock_fidelity_trace",
        [](const RingSpec& spec, const Vec& input, int mode, int n_max,
           const std::vector<double>& times, double theta, const std::vector<int>& hops) {
            const auto states = evolve_fock(spec, input, mode, n_max, times);
            const int n = spec.n_sites();
            std::vector<std::vector<double>> series(n, std::vector<double>(times.size()));
            for (size_t s = 0; s < states.size(); ++s)
                for (int i = 0; i < n; ++i) {
                    const auto rho = reduce_mode(states[s], i, n_max);
                    const int h = i < static_cast<int>(hops.size()) ? hops[i] : 0;
                    series[i][s] = fidelity(rho, phase_identified(input, h, theta));
                }
            return series;
        },
        py::arg("spec"), py::arg("input"), py::arg("mode"), py::arg("n_max"), py::arg("times"),
        py::arg("theta") = 0.0, py::arg("hops") = std::vector<int>{});
    m.def(
        "reduced_density",
        [](const RingSpec& spec, const Vec& input, int mode_in, int mode_out, int n_max, double t) {
            const auto states = evolve_fock(spec, input, mode_in, n_max, {t});
            return to_numpy(reduce_mode(states[0], mode_out, n_max).matrix);
        },
        py::arg("spec"), py::arg("input"), py::arg("mode_in"), py::arg("mode_out"),
        py::arg("n_max"), py::arg("t"));
    m.def(
        "fidelity",
        [](const NumpyMatrix& rho, const Vec& psi) {
            ModeDensity d{static_cast<int>(rho.shape(0)), from_numpy(rho)};
            return fidelity(d, psi);
        },
        py::arg("rho"), py::arg("psi"));
    m.def("phase_identified", &phase_identified, py::arg("psi"), py::arg("hops"), py::arg("theta"));
    m.def("single_photon_oracle", &single_photon_oracle, py::arg("s"), py::arg("a"), py::arg("b"),
          py::arg("theta"));
    m.def(
        "fock_turnplate_meta",
        [](const RingSpec& spec, int input_mode, double tol, int z_max) -> py::object {
            const auto meta = fock_turnplate_meta(spec, input_mode, tol, z_max);
            if (!meta) return py::none();
            py::dict d;
            d["tau"] = meta->tau;
            d["first_hop_site"] = meta->first_hop_site;
            d["theta"] = meta->theta;
            d["hops_per_site"] = meta->hops_per_site;
            return d;
        },
        py::arg("spec"), py::arg("input_mode") = 0, py::arg("tol") = 1e-9, py::arg("z_max") = 10);

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
