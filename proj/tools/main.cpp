// turnplate CLI: spectrum / blocks / fit / evolve / effective / fock / report
// on ring spec JSON files. Exit codes: 0 success (including "no fit"),
// 2 input error, 3 numeric error.

#include "turnplate/turnplate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

using namespace turnplate;
using nlohmann::ordered_json;

namespace {

struct Options {
    std::string spec_path;
    double t_max = -1.0; // <0: pick a command-specific default
    int steps = 2000;
    double tol = 1e-9;
    int z_max = 10;
    int n_max = 2;
    double cluster_tol = 1e-9;
    std::string out;
    std::string format; // csv | json | svg
    int site = 1;
    double threshold = -1.0;
    std::string weak_links;
    std::string input = "1,1,1";
    double theta = std::numeric_limits<double>::quiet_NaN();
    std::string spec_out;
    std::string density_out;
    int density_site = -1;
    double density_time = -1.0;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--spec", opt.spec_path, "ring spec JSON file")->required();
    cmd->add_option("--tmax", opt.t_max, "time window");
    cmd->add_option("--steps", opt.steps, "grid steps per window");
    cmd->add_option("--tol", opt.tol, "matching fit tolerance");
    cmd->add_option("--zmax", opt.z_max, "matching fit |Z| bound");
    cmd->add_option("--nmax", opt.n_max, "photon-number truncation");
    cmd->add_option("--cluster-tol", opt.cluster_tol, "eigenvalue degeneracy threshold");
    cmd->add_option("--out", opt.out, "output path (default: stdout)");
    cmd->add_option("--format", opt.format, "csv | json | svg");
    cmd->add_option("--site", opt.site, "site index, 1-based");
    cmd->add_option("--threshold", opt.threshold, "transfer detection threshold");
    cmd->add_option("--weak-links", opt.weak_links, "comma separated 1-based link indices");
    cmd->add_option("--input", opt.input, "single-mode amplitudes c0,c1,... (item: re or re:im)");
    cmd->add_option("--theta", opt.theta, "override per-hop identification phase");
    cmd->add_option("--spec-out", opt.spec_out, "also write the effective ring spec here");
    cmd->add_option("--density-out", opt.density_out, "dump a reduced density matrix as JSON");
    cmd->add_option("--density-site", opt.density_site, "site for --density-out (default: input)");
    cmd->add_option("--density-time", opt.density_time, "time for --density-out (default: tau)");
}

void emit(const Options& opt, const std::string& content) {
    if (opt.out.empty())
        std::cout << content;
    else
        write_file(opt.out, content);
}

std::set<int> parse_weak_links(const Options& opt, const RingSpec& spec) {
    if (opt.weak_links.empty()) {
        auto weak = default_weak_links(spec);
        if (weak.empty())
            throw InvalidSpec("no weak links found by the default rule; pass --weak-links");
        return weak;
    }
    std::set<int> weak;
    std::stringstream ss(opt.weak_links);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            weak.insert(std::stoi(item) - 1);
        } catch (const std::exception&) {
            throw InvalidSpec("bad --weak-links entry: " + item);
        }
    }
    return weak;
}

Vec parse_input_state(const std::string& text) {
    Vec amps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos)
                amps.push_back(Complex(std::stod(item), 0.0));
            else
                amps.push_back(Complex(std::stod(item.substr(0, colon)),
                                       std::stod(item.substr(colon + 1))));
        } catch (const std::exception&) {
            throw InvalidSpec("bad --input entry: " + item);
        }
    }
    double nrm = norm(amps);
    if (!(nrm > 0)) throw InvalidSpec("--input state has zero norm");
    for (auto& a : amps) a /= nrm;
    return amps;
}

ordered_json spec_json(const RingSpec& spec) {
    ordered_json j;
    j["n_sites"] = spec.n_sites();
    j["couplings"] = ordered_json::array();
    for (const auto& link : spec.links())
        j["couplings"].push_back({{"mag", link.mag}, {"phase", link.phase}});
    return j;
}

ordered_json complex_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json matrix_json(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.dim(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

// full analysis pipeline shared by spectrum / fit / report
struct Analysis {
    RingSpec normalized;
    CyclicSymmetry sym;
    HermitianEigen eigen;
    SymmetryLabels labels;
    std::optional<MatchingFit> fit;
};

Analysis analyze(const RingSpec& spec, const Options& opt) {
    Analysis a{gauge_normalize(spec).first, {}, {}, {}, std::nullopt};
    a.sym = detect_symmetry(a.normalized);
    a.eigen = hermitian_eig(build_hamiltonian(a.normalized));
    a.labels = symmetry_labels(a.eigen, shift_operator(spec.n_sites(), a.sym.p), a.sym.n,
                               opt.cluster_tol);
    a.fit = fit_matching(a.labels.values, a.labels.labels, a.sym.n, opt.tol, opt.z_max);
    return a;
}

ordered_json fit_json(const Analysis& a) {
    if (!a.fit) return nullptr;
    ordered_json f;
    f["epsilon"] = a.fit->epsilon;
    f["epsilon0"] = a.fit->epsilon0;
    f["z_values"] = a.fit->z_values;
    f["residual"] = a.fit->residual;
    f["tau"] = period(*a.fit);
    return f;
}

int cmd_spectrum(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const Analysis a = analyze(spec, opt);

    if (opt.format == "csv") {
        std::string csv = "index,eigenvalue,label\n";
        for (size_t k = 0; k < a.labels.values.size(); ++k)
            csv += std::to_string(k + 1) + "," + format_double(a.labels.values[k]) + "," +
                   std::to_string(a.labels.labels[k]) + "\n";
        emit(opt, csv);
        return 0;
    }

    ordered_json j;
    j["n_sites"] = spec.n_sites();
    j["total_phase"] = total_phase(spec);
    j["symmetry"] = {{"n", a.sym.n}, {"p", a.sym.p}};
    j["eigenvalues"] = a.labels.values;
    j["labels"] = a.labels.labels;

    // per-block vertical offsets of the characteristic curves
    double prod = 1.0;
    for (int i = 0; i < a.sym.p; ++i) prod *= a.normalized.links()[i].mag;
    ordered_json offsets = ordered_json::array();
    if (a.sym.n > 1) {
        for (const auto& block : block_reduce(a.normalized, a.sym))
            offsets.push_back({{"l", block.label},
                               {"phi_l", block.total_phase},
                               {"offset", 2.0 * prod * std::cos(block.total_phase)}});
    }
    j["block_offsets"] = offsets;

    const auto [det, predicted] = char_poly_check(spec);
    j["char_poly"] = {{"det", complex_json(det)},
                      {"predicted", predicted},
                      {"deviation", std::abs(det - Complex(predicted))}};
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int cmd_blocks(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const auto normalized = gauge_normalize(spec).first;
    const auto sym = detect_symmetry(normalized);
    ordered_json j;
    j["symmetry"] = {{"n", sym.n}, {"p", sym.p}};
    if (sym.n == 1) {
        j["blocks"] = ordered_json::array();
        emit(opt, j.dump(2) + "\n");
        return 0;
    }
    const auto blocks = block_reduce(normalized, sym);
    std::vector<double> merged;
    ordered_json arr = ordered_json::array();
    for (const auto& block : blocks) {
        ordered_json b;
        b["l"] = block.label;
        b["total_phase"] = block.total_phase;
        if (block.scalar) b["scalar"] = *block.scalar;
        if (block.spec) b["spec"] = spec_json(*block.spec);
        const auto values = block.spectrum();
        b["eigenvalues"] = values;
        merged.insert(merged.end(), values.begin(), values.end());
        arr.push_back(b);
    }
    j["blocks"] = arr;

    std::sort(merged.begin(), merged.end());
    const auto full = hermitian_eig(build_hamiltonian(normalized)).values;
    double dev = 0.0;
    for (size_t k = 0; k < full.size(); ++k) dev = std::max(dev, std::abs(full[k] - merged[k]));
    j["full_eigenvalues"] = full;
    j["union_max_deviation"] = dev;

    const auto h = build_hamiltonian(normalized);
    double offblock = 0.0;
    for (int la = -(sym.n - 1) / 2; la <= (sym.n - 1) / 2; ++la)
        for (int lb = -(sym.n - 1) / 2; lb <= (sym.n - 1) / 2; ++lb) {
            if (la == lb) continue;
            const auto pa = symmetry_projector(spec.n_sites(), sym.p, sym.n, la);
            const auto pb = symmetry_projector(spec.n_sites(), sym.p, sym.n, lb);
            offblock = std::max(offblock, max_abs(matmul(matmul(pa, h), pb)));
        }
    j["max_offblock_norm"] = offblock;
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int cmd_fit(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const Analysis a = analyze(spec, opt);
    ordered_json j;
    j["symmetry"] = {{"n", a.sym.n}, {"p", a.sym.p}};
    j["eigenvalues"] = a.labels.values;
    j["labels"] = a.labels.labels;
    j["fit"] = fit_json(a);
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int cmd_evolve(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const int n = spec.n_sites();
    if (opt.site < 1 || opt.site > n) throw InvalidSpec("--site out of range");
    const auto h = build_hamiltonian(spec);
    Vec psi0(n, 0.0);
    psi0[opt.site - 1] = 1.0;

    double t_max = opt.t_max;
    if (t_max <= 0.0) {
        const Analysis a = analyze(spec, opt);
        t_max = a.fit ? 3.2 * period(*a.fit) : 10.0;
    }
    const auto trace = probability_trace(h, psi0, t_max, opt.steps);

    if (opt.format == "svg") {
        std::vector<std::string> labels;
        for (int i = 1; i <= n; ++i) labels.push_back("site " + std::to_string(i));
        emit(opt, trace_to_svg(trace, labels, "P"));
    } else {
        emit(opt, trace_to_csv(trace, "p"));
    }

    if (opt.threshold > 0.0) {
        ordered_json peaks;
        for (int i = 0; i < n; ++i) {
            const auto t = detect_transfer_time(trace, i, opt.threshold);
            peaks["site" + std::to_string(i + 1)] = t ? ordered_json(*t) : ordered_json(nullptr);
        }
        std::cout << ordered_json{{"peaks", peaks}}.dump(2) << "\n";
    }
    return 0;
}

int cmd_effective(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const auto weak = parse_weak_links(opt, spec);
    const auto [h0, v] = split_hamiltonian(spec, weak);
    const auto manifold = zero_manifold(h0, 1e-8);
    const auto eff = effective_hamiltonian(h0, v, manifold);

    ordered_json j;
    ordered_json weak_arr = ordered_json::array();
    for (const int l : weak) weak_arr.push_back(l + 1);
    j["weak_links"] = weak_arr;
    ordered_json sites = ordered_json::array();
    for (const int s : manifold.site_indices) sites.push_back(s + 1);
    j["manifold_sites"] = sites;
    j["h_eff"] = matrix_json(eff.matrix);
    j["g"] = eff.g;
    j["effective_phase"] = eff.phase;
    const auto eff_spec = effective_ring_spec(eff);
    j["effective_spec"] = spec_json(eff_spec);
    emit(opt, j.dump(2) + "\n");
    if (!opt.spec_out.empty()) write_file(opt.spec_out, dump_spec(eff_spec));
    return 0;
}

int cmd_fock(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const int n = spec.n_sites();
    if (opt.site < 1 || opt.site > n) throw InvalidSpec("--site out of range");
    const int mode = opt.site - 1;
    const Vec input = parse_input_state(opt.input);
    if (static_cast<int>(input.size()) > opt.n_max + 1)
        throw InvalidSpec("--input has more photons than --nmax");

    const auto meta = fock_turnplate_meta(spec, mode, opt.tol, opt.z_max);
    double theta = meta ? meta->theta : 0.0;
    if (!std::isnan(opt.theta)) theta = opt.theta;
    std::vector<int> hops(n, 0);
    if (meta) hops = meta->hops_per_site;

    double t_max = opt.t_max;
    if (t_max <= 0.0) t_max = meta ? 3.2 * meta->tau : 50.0;

    const auto times = uniform_grid(t_max, opt.steps);
    const auto states = evolve_fock(spec, input, mode, opt.n_max, times);

    TraceSeries identified, raw;
    identified.times = raw.times = times;
    identified.series.assign(n, std::vector<double>(times.size()));
    raw.series.assign(n, std::vector<double>(times.size()));
    for (size_t s = 0; s < states.size(); ++s)
        for (int i = 0; i < n; ++i) {
            const auto rho = reduce_mode(states[s], i, opt.n_max);
            identified.series[i][s] = fidelity(rho, phase_identified(input, hops[i], theta));
            raw.series[i][s] = fidelity(rho, input);
        }

    if (opt.format == "svg") {
        std::vector<std::string> labels;
        for (int i = 1; i <= n; ++i) labels.push_back("site " + std::to_string(i));
        emit(opt, trace_to_svg(identified, labels, "F"));
    } else {
        emit(opt, trace_to_csv(identified, "f"));
        if (!opt.out.empty()) {
            std::string raw_path = opt.out;
            const auto dot = raw_path.rfind('.');
            raw_path.insert(dot == std::string::npos ? raw_path.size() : dot, "_raw");
            write_file(raw_path, trace_to_csv(raw, "f"));
        }
    }

    if (!opt.density_out.empty()) {
        const int density_site = opt.density_site > 0 ? opt.density_site - 1 : mode;
        if (density_site < 0 || density_site >= n) throw InvalidSpec("--density-site out of range");
        double at = opt.density_time;
        if (at < 0.0) at = meta ? meta->tau : t_max;
        const auto snapshot = evolve_fock(spec, input, mode, opt.n_max, {at});
        write_file(opt.density_out, density_to_json(reduce_mode(snapshot[0], density_site, opt.n_max)));
    }

    ordered_json m;
    if (meta) {
        m["tau"] = meta->tau;
        m["first_hop_site"] = meta->first_hop_site + 1;
        m["theta"] = theta;
        m["hops_per_site"] = hops;
    } else {
        m["tau"] = nullptr;
    }
    std::cout << ordered_json{{"turnplate", m}}.dump(2) << "\n";
    return 0;
}

int cmd_report(const Options& opt) {
    const RingSpec spec = load_spec(opt.spec_path);
    const int n = spec.n_sites();
    const int site = opt.site;
    if (site < 1 || site > n) throw InvalidSpec("--site out of range");
    const Analysis a = analyze(spec, opt);

    ordered_json j;
    j["spec"] = spec_json(spec);
    j["total_phase"] = total_phase(spec);
    j["symmetry"] = {{"n", a.sym.n}, {"p", a.sym.p}};
    j["eigenvalues"] = a.labels.values;
    j["labels"] = a.labels.labels;
    const auto [det, predicted] = char_poly_check(spec);
    j["char_poly"] = {{"det", complex_json(det)},
                      {"predicted", predicted},
                      {"deviation", std::abs(det - Complex(predicted))}};
    j["fit"] = fit_json(a);
    j["predicted_tau"] = a.fit ? ordered_json(period(*a.fit)) : ordered_json(nullptr);

    const auto h = build_hamiltonian(spec);
    Vec psi0(n, 0.0);
    psi0[site - 1] = 1.0;

    ordered_json measured = nullptr;
    ordered_json fidelities = nullptr;
    if (a.fit) {
        const double tau = period(*a.fit);
        // the normalized gauge commutes with the shift; measure there
        const auto hn = build_hamiltonian(a.normalized);
        const auto u = propagator(hn, tau);
        int target = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (i == site - 1) continue;
            if (std::norm(u(i, site - 1)) > best) {
                best = std::norm(u(i, site - 1));
                target = i;
            }
        }
        const double threshold = opt.threshold > 0.0 ? opt.threshold : 0.99;
        const auto trace = probability_trace(h, psi0, 1.3 * tau, opt.steps);
        const auto t_measured = detect_transfer_time(trace, target, threshold);
        measured = ordered_json();
        measured["target_site"] = target + 1;
        measured["time"] = t_measured ? ordered_json(*t_measured) : ordered_json(nullptr);

        const auto t_op = shift_operator(n, a.sym.p);
        Vec psi0n(n, 0.0);
        psi0n[site - 1] = 1.0;
        const auto report = verify_turnplate(hn, t_op, *a.fit, psi0n, a.sym.n);
        fidelities = ordered_json();
        fidelities["step_fidelities"] = report.step_fidelities;
        ordered_json phases = ordered_json::array();
        for (const auto& ph : report.step_phases) phases.push_back(complex_json(ph));
        fidelities["step_phases"] = phases;
        fidelities["phase_consistency_dev"] = report.phase_consistency_dev;
    }
    j["measured_transfer"] = measured;
    j["turnplate"] = fidelities;

    ordered_json leak = nullptr;
    const auto weak = opt.weak_links.empty() ? default_weak_links(spec) : parse_weak_links(opt, spec);
    if (!weak.empty() && static_cast<int>(weak.size()) < n) {
        const auto [h0, v] = split_hamiltonian(spec, weak);
        try {
            const auto manifold = zero_manifold(h0, 1e-8);
            const double t_leak =
                opt.t_max > 0.0 ? opt.t_max : (a.fit ? 3.0 * period(*a.fit) : 50.0);
            leak = manifold_leakage(h, manifold, psi0, t_leak, opt.steps);
        } catch (const EmptyManifold&) {
            leak = nullptr;
        }
    }
    j["leakage"] = leak;
    emit(opt, j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum state turnplate simulator: rings with complex couplings"};
    app.require_subcommand(1);

    Options opt;
    const char* names[] = {"spectrum", "blocks", "fit", "evolve", "effective", "fock", "report"};
    const char* descs[] = {"eigenvalues, symmetry labels and characteristic-polynomial check",
                           "block reduction into n rings of length p",
                           "energy/symmetry matching fit and turnplate period",
                           "probability traces from a single-site excitation",
                           "strong/weak split and second-order effective Hamiltonian",
                           "truncated Fock-space fidelity traces",
                           "consolidated analysis document"};
    for (int c = 0; c < 7; ++c) add_common(app.add_subcommand(names[c], descs[c]), opt);

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        if (opt.steps < 2) throw InvalidSpec("--steps must be at least 2");
        if (!(opt.tol > 0.0)) throw InvalidSpec("--tol must be positive");
        if (!opt.format.empty() && opt.format != "csv" && opt.format != "json" &&
            opt.format != "svg")
            throw InvalidSpec("--format must be csv, json or svg");
        if (cmd == "spectrum") return cmd_spectrum(opt);
        if (cmd == "blocks") return cmd_blocks(opt);
        if (cmd == "fit") return cmd_fit(opt);
        if (cmd == "evolve") return cmd_evolve(opt);
        if (cmd == "effective") return cmd_effective(opt);
        if (cmd == "fock") return cmd_fock(opt);
        if (cmd == "report") return cmd_report(opt);
    } catch (const InvalidSpec& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidPartition& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
