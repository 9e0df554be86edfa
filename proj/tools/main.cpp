#include "coadjoint/dynamics.hpp"
#include "coadjoint/symplectic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace coadjoint;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;

Vec parse_csv_vec(const std::string& text) {
    Vec out(0);
    if (text.empty()) return out;
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    out.resize(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot open output file '" + path + "'");
    os << content;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw InputError("config: unknown key '" + it.key() + "' in " + where);
    }
}

std::vector<Monomial> parse_terms(const json& terms, int n, int k, const std::string& where) {
    std::vector<Monomial> out;
    for (const auto& t : terms) {
        reject_unknown_keys(t, {"c", "x", "y"}, where);
        if (!t.contains("c")) throw InputError("config: term without coefficient in " + where);
        Monomial m;
        m.coeff = t["c"].get<double>();
        m.x_pow.assign(n, 0);
        m.y_pow.assign(k, 0);
        if (t.contains("x")) {
            auto xp = t["x"].get<std::vector<int>>();
            if (static_cast<int>(xp.size()) != n)
                throw InputError("config: 'x' exponents must have base_dim entries in " + where);
            m.x_pow = xp;
        }
        if (t.contains("y")) {
            auto yp = t["y"].get<std::vector<int>>();
            if (static_cast<int>(yp.size()) != k)
                throw InputError("config: 'y' exponents must have rank entries in " + where);
            m.y_pow = yp;
        }
        out.push_back(std::move(m));
    }
    return out;
}

StructureConstants algebra_from_config(const json& node) {
    if (node.is_string()) return catalog(node.get<std::string>()).constants;
    if (node.is_object()) return constants_from_json(node.dump());
    throw InputError("config: 'algebra' must be a catalog name or inline constants");
}

struct SimulationSetup {
    AlgebroidSpec spec;
    Observable hamiltonian;
    DualPoint z0;
    std::vector<Observable> integrals;
    double dt = 0.0;
    double t_end = 0.0;
    Method method = Method::rk4;
    double integral_tol = 1e-8;
};

SimulationSetup load_simulation_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot read config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }

    reject_unknown_keys(cfg,
                        {"schema", "seed", "preset", "inertia", "coupling", "algebra",
                         "base_dim", "hamiltonian", "z0", "integrator", "observables",
                         "tolerances"},
                        "top level");
    if (!cfg.contains("schema") || cfg["schema"].get<int>() != 1)
        throw InputError("config: requires \"schema\": 1");
    if (!cfg.contains("integrator")) throw InputError("config: missing 'integrator'");

    const json& integ = cfg["integrator"];
    reject_unknown_keys(integ, {"method", "dt", "t_end"}, "integrator");
    SimulationSetup setup;
    setup.dt = integ.value("dt", 0.0);
    setup.t_end = integ.value("t_end", 0.0);
    std::string method = integ.value("method", "rk4");
    if (method == "rk4")
        setup.method = Method::rk4;
    else if (method == "euler")
        setup.method = Method::euler;
    else
        throw InputError("config: integrator.method must be rk4 or euler");
    if (setup.dt <= 0.0 || setup.t_end < setup.dt)
        throw InputError("config: need dt > 0 and t_end >= dt");

    if (cfg.contains("tolerances")) {
        reject_unknown_keys(cfg["tolerances"], {"integral"}, "tolerances");
        setup.integral_tol = cfg["tolerances"].value("integral", 1e-8);
    }

    if (cfg.contains("preset")) {
        PresetOptions opts;
        opts.inertia = Vec(0);
        opts.coupling = Vec(0);
        if (cfg.contains("inertia")) {
            auto v = cfg["inertia"].get<std::vector<double>>();
            opts.inertia = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        if (cfg.contains("coupling")) {
            auto v = cfg["coupling"].get<std::vector<double>>();
            opts.coupling = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        PresetSystem sys = preset(cfg["preset"].get<std::string>(), opts);
        setup.spec = sys.spec;
        setup.hamiltonian = sys.hamiltonian;
        setup.z0 = sys.z0;
        setup.integrals = sys.integrals;
    } else {
        if (!cfg.contains("algebra") || !cfg.contains("hamiltonian") || !cfg.contains("z0"))
            throw InputError("config: need 'preset' or ('algebra', 'hamiltonian', 'z0')");
        StructureConstants L = algebra_from_config(cfg["algebra"]);
        int base_dim = cfg.value("base_dim", 0);
        if (base_dim < 0) throw InputError("config: base_dim must be >= 0");
        setup.spec = fiberwise_product_spec(base_dim, L);
        const json& ham = cfg["hamiltonian"];
        reject_unknown_keys(ham, {"name", "terms"}, "hamiltonian");
        if (!ham.contains("terms")) throw InputError("config: hamiltonian needs 'terms'");
        setup.hamiltonian =
            polynomial_observable(ham.value("name", "H"), base_dim, L.rank(),
                                  parse_terms(ham["terms"], base_dim, L.rank(), "hamiltonian"));
        setup.integrals = {setup.hamiltonian};
    }

    if (cfg.contains("z0")) {
        const json& z = cfg["z0"];
        reject_unknown_keys(z, {"x", "y"}, "z0");
        Vec x(0), y(0);
        if (z.contains("x")) {
            auto v = z["x"].get<std::vector<double>>();
            x = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        if (z.contains("y")) {
            auto v = z["y"].get<std::vector<double>>();
            y = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        if (x.size() != setup.spec.base_dim || y.size() != setup.spec.rank)
            throw InputError("config: z0 dimensions do not match the phase space");
        setup.z0 = DualPoint{x, y};
    }

    if (cfg.contains("observables")) {
        for (const auto& node : cfg["observables"]) {
            reject_unknown_keys(node, {"name", "terms"}, "observables");
            if (!node.contains("name") || !node.contains("terms"))
                throw InputError("config: each observable needs 'name' and 'terms'");
            setup.integrals.push_back(polynomial_observable(
                node["name"].get<std::string>(), setup.spec.base_dim, setup.spec.rank,
                parse_terms(node["terms"], setup.spec.base_dim, setup.spec.rank,
                            "observables")));
        }
    }
    return setup;
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
    SimulationSetup setup = load_simulation_config(config_path);
    std::filesystem::create_directories(out_dir);

    Trajectory traj;
    bool diverged = false;
    try {
        traj = integrate(setup.spec, setup.hamiltonian, setup.z0, setup.t_end, setup.dt,
                         setup.method);
    } catch (const DivergenceError& e) {
        std::cerr << e.what() << "\n";
        traj = e.partial;
        diverged = true;
    }

    write_file(out_dir + "/trajectory.csv",
               trajectory_csv(setup.spec.base_dim, setup.spec.rank, traj));
    ConservationReport report = conservation_report(traj, setup.integrals);
    write_file(out_dir + "/conservation.json", report.to_json() + "\n");
    if (diverged) return kExitDiverged;

    for (const auto& e : report.entries) {
        if (e.max_abs_drift > setup.integral_tol) {
            std::cerr << "integral '" << e.name << "' drifted by "
                      << format_double(e.max_abs_drift) << " (tol "
                      << format_double(setup.integral_tol) << ")\n";
            return kExitCheckFailed;
        }
    }
    return kExitOk;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        write_file(out_path, text + "\n");
}

int run_check_jacobi(const std::string& algebra, double tol, const std::string& out) {
    CatalogEntry entry = catalog(algebra);
    const double defect = jacobi_defect(entry.constants);
    json j{{"check", "jacobi"}, {"algebra", entry.name}, {"max_defect", defect}, {"tol", tol}};
    emit(j.dump(2), out);
    return defect <= tol ? kExitOk : kExitCheckFailed;
}

int run_check_axioms(const std::string& group, int base_dim, bool coadjoint_chart,
                     const std::string& xi_text, int samples, std::uint32_t seed,
                     double tol, const std::string& out) {
    CatalogEntry entry = catalog(group);
    if (!entry.rep) throw InputError("check axioms: algebra has no matrix representation");
    GroupoidChart chart;
    if (coadjoint_chart) {
        Vec xi = parse_csv_vec(xi_text);
        if (xi.size() != entry.constants.rank())
            throw InputError("check axioms: --xi must have rank entries");
        chart = make_coadjoint_groupoid(base_dim, *entry.rep, DualVector{xi});
    } else {
        chart = make_trivial_groupoid(base_dim, *entry.rep);
    }
    AxiomReport report = axioms_check(chart, samples, seed);
    emit(report.to_json(), out);
    return report.max_residual() <= tol ? kExitOk : kExitCheckFailed;
}

int run_check_multiplicativity(const std::string& group, int samples, std::uint32_t seed,
                               double h, double tol, const std::string& out) {
    CatalogEntry entry = catalog(group);
    if (!entry.rep) throw InputError("check multiplicativity: algebra has no matrix representation");
    CotangentGroupoid cot = cotangent_groupoid(*entry.rep, entry.constants);
    const double defect = multiplicativity_check(cot.chart, cot.omega, samples, seed, h);
    json j{{"check", "multiplicativity"}, {"group", entry.name}, {"max_defect", defect},
           {"h", h},  {"samples", samples},          {"seed", seed},
           {"tol", tol}};
    emit(j.dump(2), out);
    return defect <= tol ? kExitOk : kExitCheckFailed;
}

int run_check_involution(const std::string& preset_name, int samples, std::uint32_t seed,
                         double tol, const std::string& out) {
    PresetSystem sys = preset(preset_name);
    InvolutionReport report = involution_check(sys.spec, sys.integrals, samples, seed, tol);
    emit(report.to_json(), out);
    const int m = static_cast<int>(sys.integrals.size());
    return report.in_involution_count == m ? kExitOk : kExitCheckFailed;
}

int run_check_correspondence(const std::string& algebra, const std::string& xi_text,
                             int base_dim, int samples, std::uint32_t seed, double tol,
                             const std::string& out) {
    CatalogEntry entry = catalog(algebra);
    const int k = entry.constants.rank();
    Vec xi = parse_csv_vec(xi_text);
    if (xi.size() != k) throw InputError("check correspondence: --xi must have rank entries");

    std::vector<Monomial> hterms;
    for (int a = 0; a < k; ++a) {
        Monomial m;
        m.coeff = 0.5 / (1.0 + a);
        m.x_pow.assign(0, 0);
        m.y_pow.assign(k, 0);
        m.y_pow[a] = 2;
        hterms.push_back(m);
    }
    Observable h = polynomial_observable("h", 0, k, hterms);

    std::vector<Observable> candidates;
    if (entry.name == "so3") {
        std::vector<Monomial> terms;
        for (int a = 0; a < 3; ++a) {
            Monomial m;
            m.coeff = 1.0;
            m.y_pow.assign(3, 0);
            m.y_pow[a] = 2;
            terms.push_back(m);
        }
        candidates.push_back(polynomial_observable("casimir_yy", 0, 3, terms));
    } else if (entry.name == "e3") {
        std::vector<Monomial> terms;
        for (int a = 3; a < 6; ++a) {
            Monomial m;
            m.coeff = 1.0;
            m.y_pow.assign(6, 0);
            m.y_pow[a] = 2;
            terms.push_back(m);
        }
        candidates.push_back(polynomial_observable("casimir_pp", 0, 6, terms));
    } else {
        candidates.push_back(h);  // trivially in involution with itself
    }
    candidates.push_back(coordinate_observable(0, k, 0));  // generically failing

    json arr = json::array();
    bool ok = true;
    for (const auto& f : candidates) {
        CorrespondenceReport rep =
            correspondence_check(entry.constants, DualVector{xi}, base_dim, f, h, 1e-8,
                                 samples, seed);
        arr.push_back({{"candidate", f.name},
                       {"product_defect", rep.product_defect},
                       {"fiber_defect", rep.fiber_defect},
                       {"route_gap", rep.route_gap()},
                       {"product_pass", rep.product_pass},
                       {"fiber_pass", rep.fiber_pass}});
        if (rep.route_gap() > tol || !rep.verdicts_agree()) ok = false;
    }
    json j{{"check", "correspondence"}, {"algebra", entry.name}, {"candidates", arr},
           {"tol", tol}};
    emit(j.dump(2), out);
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coadjoint orbits, Lie-Poisson dynamics, and groupoid checks"};
    app.require_subcommand(1);

    // algebra
    auto* algebra = app.add_subcommand("algebra", "catalog of Lie algebras");
    algebra->require_subcommand(1);
    algebra->add_subcommand("list", "list catalog names");
    auto* info = algebra->add_subcommand("info", "rank, Jacobi defect, representation size");
    std::string info_name;
    info->add_option("name", info_name)->required();

    // orbit
    auto* orbit = app.add_subcommand("orbit", "coadjoint orbit sampling and dimension");
    orbit->require_subcommand(1);
    std::string orb_algebra, orb_xi, orb_out, orb_witnesses;
    int orb_n = 100;
    std::uint32_t orb_seed = 1;
    bool orb_verify = false;
    auto* sample = orbit->add_subcommand("sample", "sample orbit points as CSV");
    sample->add_option("--algebra", orb_algebra)->required();
    sample->add_option("--xi", orb_xi)->required();
    sample->add_option("--n", orb_n);
    sample->add_option("--seed", orb_seed);
    sample->add_option("--out", orb_out);
    sample->add_option("--witnesses", orb_witnesses);
    sample->add_flag("--verify", orb_verify, "re-check each row against its witness");
    auto* dim = orbit->add_subcommand("dim", "print the orbit dimension");
    dim->add_option("--algebra", orb_algebra)->required();
    dim->add_option("--xi", orb_xi)->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate a configured system");
    std::string sim_config, sim_out = ".";
    simulate->add_option("config", sim_config)->required();
    simulate->add_option("--out", sim_out);

    // check
    auto* check = app.add_subcommand("check", "verification suites emitting JSON");
    check->require_subcommand(1);
    std::string chk_algebra, chk_group, chk_preset, chk_xi, chk_out;
    int chk_samples = 50, chk_base_dim = 2;
    std::uint32_t chk_seed = 1;
    double chk_h = 1e-5, chk_tol = -1.0;
    bool chk_coadjoint = false;

    auto* cj = check->add_subcommand("jacobi", "Jacobi identity of an algebra");
    cj->add_option("--algebra", chk_algebra)->required();
    cj->add_option("--tol", chk_tol);
    cj->add_option("--out", chk_out);

    auto* ca = check->add_subcommand("axioms", "groupoid axioms of a chart");
    ca->add_option("--group", chk_group)->required();
    ca->add_option("--base-dim", chk_base_dim);
    ca->add_flag("--coadjoint", chk_coadjoint, "use the coadjoint chart (needs --xi)");
    ca->add_option("--xi", chk_xi);
    ca->add_option("--samples", chk_samples);
    ca->add_option("--seed", chk_seed);
    ca->add_option("--tol", chk_tol);
    ca->add_option("--out", chk_out);

    auto* cm = check->add_subcommand("multiplicativity", "m*w = pr1*w + pr2*w on the cotangent groupoid");
    cm->set_help_flag("--help", "print help");  // frees -h for the step size below
    cm->add_option("--group", chk_group)->required();
    cm->add_option("--samples", chk_samples);
    cm->add_option("--seed", chk_seed);
    cm->add_option("--h", chk_h);
    cm->add_option("--tol", chk_tol);
    cm->add_option("--out", chk_out);

    auto* ci = check->add_subcommand("involution", "pairwise brackets of preset integrals");
    ci->add_option("--preset", chk_preset)->required();
    ci->add_option("--samples", chk_samples);
    ci->add_option("--seed", chk_seed);
    ci->add_option("--tol", chk_tol);
    ci->add_option("--out", chk_out);

    auto* cc = check->add_subcommand("correspondence", "product-space vs fiberwise first integrals");
    cc->add_option("--algebra", chk_algebra)->required();
    cc->add_option("--xi", chk_xi)->required();
    cc->add_option("--base-dim", chk_base_dim);
    cc->add_option("--samples", chk_samples);
    cc->add_option("--seed", chk_seed);
    cc->add_option("--tol", chk_tol);
    cc->add_option("--out", chk_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (algebra->parsed()) {
            if (algebra->get_subcommand("list")->parsed()) {
                for (const auto& n : catalog_names()) std::cout << n << "\n";
                return kExitOk;
            }
            CatalogEntry entry = catalog(info_name);
            nlohmann::json j{{"name", entry.name},
                             {"rank", entry.constants.rank()},
                             {"jacobi_defect", jacobi_defect(entry.constants)},
                             {"matrix_dim", entry.rep ? entry.rep->dim : 0}};
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }

        if (orbit->parsed()) {
            CatalogEntry entry = catalog(orb_algebra);
            Vec xi = parse_csv_vec(orb_xi);
            if (xi.size() != entry.constants.rank())
                throw InputError("orbit: --xi must have rank entries");
            if (orbit->get_subcommand("dim")->parsed()) {
                std::cout << orbit_dimension(entry.constants, DualVector{xi}) << "\n";
                return kExitOk;
            }
            if (!entry.rep) throw InputError("orbit sample: algebra has no matrix representation");
            auto points = orbit_sample(*entry.rep, DualVector{xi}, orb_n, orb_seed);
            std::string csv = orbit_csv(points);
            if (orb_out.empty())
                std::cout << csv;
            else
                write_file(orb_out, csv);
            if (!orb_witnesses.empty()) write_file(orb_witnesses, witnesses_json(points) + "\n");
            if (orb_verify) {
                double worst = 0.0;
                for (const auto& p : points) {
                    Vec again = big_coad(*entry.rep, p.witness, p.origin).coeffs;
                    worst = std::max(worst, (again - p.xi.coeffs).cwiseAbs().maxCoeff());
                }
                if (entry.name == "so3") {
                    const double r0 = xi.norm();
                    for (const auto& p : points)
                        worst = std::max(worst, std::abs(p.xi.coeffs.norm() - r0));
                } else if (entry.name == "e3") {
                    auto pp = [](const Vec& v) { return v.tail(3).squaredNorm(); };
                    auto yp = [](const Vec& v) { return v.head(3).dot(v.tail(3)); };
                    for (const auto& p : points) {
                        worst = std::max(worst, std::abs(pp(p.xi.coeffs) - pp(xi)));
                        worst = std::max(worst, std::abs(yp(p.xi.coeffs) - yp(xi)));
                    }
                }
                std::cerr << "verify: max invariant deviation " << format_double(worst) << "\n";
                if (worst > 1e-9) return kExitCheckFailed;
            }
            return kExitOk;
        }

        if (simulate->parsed()) return run_simulate(sim_config, sim_out);

        if (check->parsed()) {
            if (cj->parsed())
                return run_check_jacobi(chk_algebra, chk_tol < 0 ? 1e-12 : chk_tol, chk_out);
            if (ca->parsed())
                return run_check_axioms(chk_group, chk_base_dim, chk_coadjoint, chk_xi,
                                        chk_samples, chk_seed, chk_tol < 0 ? 1e-9 : chk_tol,
                                        chk_out);
            if (cm->parsed())
                return run_check_multiplicativity(chk_group, chk_samples, chk_seed, chk_h,
                                                  chk_tol < 0 ? 1e-4 : chk_tol, chk_out);
            if (ci->parsed())
                return run_check_involution(chk_preset, chk_samples, chk_seed,
                                            chk_tol < 0 ? 1e-8 : chk_tol, chk_out);
            if (cc->parsed())
                return run_check_correspondence(chk_algebra, chk_xi, chk_base_dim, chk_samples,
                                                chk_seed, chk_tol < 0 ? 1e-10 : chk_tol,
                                                chk_out);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
