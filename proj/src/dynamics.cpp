#include "coadjoint/dynamics.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace coadjoint {

namespace {

Vec field_of(const AlgebroidSpec& spec, const Observable& H, const Vec& z) {
    const int n = spec.base_dim;
    DualPoint p{z.head(n), z.tail(spec.rank)};
    PhaseVelocity v = hamiltonian_vector_field(spec, H, p);
    Vec out(z.size());
    out << v.dx, v.dy;
    return out;
}

}  // namespace

Trajectory integrate(const AlgebroidSpec& spec, const Observable& H, const DualPoint& z0,
                     double t_end, double dt, Method method) {
    if (dt <= 0.0) throw InputError("integrate: dt must be positive");
    if (t_end < dt) throw InputError("integrate: t_end must be at least dt");
    if (z0.x.size() != spec.base_dim || z0.y.size() != spec.rank)
        throw InputError("integrate: z0 dimensions do not match the spec");

    const int n = spec.base_dim, k = spec.rank;
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    Vec z(n + k);
    z << z0.x, z0.y;
    traj.times.push_back(0.0);
    traj.states.push_back(z0);

    for (std::size_t s = 1; s <= steps; ++s) {
        if (method == Method::euler) {
            z += dt * field_of(spec, H, z);
        } else {
            Vec k1 = field_of(spec, H, z);
            Vec k2 = field_of(spec, H, z + 0.5 * dt * k1);
            Vec k3 = field_of(spec, H, z + 0.5 * dt * k2);
            Vec k4 = field_of(spec, H, z + dt * k3);
            z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double t = static_cast<double>(s) * dt;
        if (!z.allFinite())
            throw DivergenceError("integrate: state became non-finite at t = " +
                                      format_double(t),
                                  std::move(traj), traj.times.back());
        traj.times.push_back(t);
        traj.states.push_back(DualPoint{z.head(n), z.tail(k)});
    }
    return traj;
}

const DriftStat& ConservationReport::operator[](const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw InputError("conservation report: no observable named '" + name + "'");
}

std::string ConservationReport::to_json() const {
    nlohmann::json j;
    for (const auto& e : entries)
        j[e.name] = {{"initial", e.initial},
                     {"max_abs_drift", e.max_abs_drift},
                     {"rel_drift", e.rel_drift}};
    return j.dump(2);
}

ConservationReport conservation_report(const Trajectory& traj,
                                       const std::vector<Observable>& observables) {
    if (traj.states.empty()) throw InputError("conservation_report: empty trajectory");
    ConservationReport report;
    for (const auto& F : observables) {
        DriftStat stat;
        stat.name = F.name;
        stat.initial = F.eval(traj.states.front());
        for (const auto& s : traj.states)
            stat.max_abs_drift = std::max(stat.max_abs_drift, std::abs(F.eval(s) - stat.initial));
        stat.rel_drift = stat.max_abs_drift / std::max(1.0, std::abs(stat.initial));
        report.entries.push_back(std::move(stat));
    }
    return report;
}

std::string trajectory_csv(int base_dim, int rank, const Trajectory& traj) {
    std::ostringstream os;
    os << "t";
    for (int i = 0; i < base_dim; ++i) os << ",x_" << i;
    for (int a = 0; a < rank; ++a) os << ",y_" << a;
    os << "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        os << format_double(traj.times[s]);
        for (int i = 0; i < base_dim; ++i) os << "," << format_double(traj.states[s].x[i]);
        for (int a = 0; a < rank; ++a) os << "," << format_double(traj.states[s].y[a]);
        os << "\n";
    }
    return os.str();
}

IntegralCheckResult first_integral_check(const AlgebroidSpec& spec, const Observable& H,
                                         const Observable& F, IntegralMode mode,
                                         const IntegralCheckParams& params) {
    IntegralCheckResult result;
    result.mode = mode;
    if (mode == IntegralMode::pointwise) {
        auto rng = make_rng(params.seed);
        for (int s = 0; s < params.samples; ++s) {
            DualPoint p{uniform_vec(rng, spec.base_dim, -params.box, params.box),
                        uniform_vec(rng, spec.rank, -params.box, params.box)};
            result.defect = std::max(result.defect, std::abs(poisson_bracket(spec, F, H, p)));
        }
    } else {
        Trajectory traj = integrate(spec, H, params.z0, params.t_end, params.dt, params.method);
        result.defect = conservation_report(traj, {F}).entries.front().max_abs_drift;
    }
    return result;
}

std::string InvolutionReport::to_json() const {
    nlohmann::json j;
    j["names"] = names;
    nlohmann::json m = nlohmann::json::array();
    for (Eigen::Index i = 0; i < defect.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index jj = 0; jj < defect.cols(); ++jj) row.push_back(defect(i, jj));
        m.push_back(row);
    }
    j["max_defect_matrix"] = m;
    j["in_involution_count"] = in_involution_count;
    j["independent_count"] = independent_count;
    j["tol"] = tol;
    return j.dump(2);
}

InvolutionReport involution_check(const AlgebroidSpec& spec,
                                  const std::vector<Observable>& fns, int samples,
                                  std::uint32_t seed, double tol) {
    const int m = static_cast<int>(fns.size());
    if (m < 2) throw InputError("involution_check: need at least two observables");

    InvolutionReport report;
    report.tol = tol;
    for (const auto& f : fns) report.names.push_back(f.name);
    report.defect = Mat::Zero(m, m);

    auto rng = make_rng(seed);
    std::vector<DualPoint> points;
    for (int s = 0; s < samples; ++s)
        points.push_back(DualPoint{uniform_vec(rng, spec.base_dim, -1.0, 1.0),
                                   uniform_vec(rng, spec.rank, -1.0, 1.0)});

    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double d = 0.0;
            for (const auto& p : points)
                d = std::max(d, std::abs(poisson_bracket(spec, fns[i], fns[j], p)));
            report.defect(i, j) = d;
            report.defect(j, i) = d;
        }

    std::vector<int> commuting;
    for (int i = 0; i < m; ++i) {
        bool ok = true;
        for (int j = 0; j < m; ++j)
            if (report.defect(i, j) > tol) ok = false;
        if (ok) commuting.push_back(i);
        report.in_involution_count += ok ? 1 : 0;
    }

    // Independence of the commuting subfamily: rank of their stacked gradients,
    // maximized over the sample points.
    if (!commuting.empty()) {
        const int nk = spec.base_dim + spec.rank;
        for (const auto& p : points) {
            Mat grads(nk, static_cast<int>(commuting.size()));
            for (std::size_t c = 0; c < commuting.size(); ++c) {
                Vec gx, gy;
                observable_gradient(fns[commuting[c]], p, gx, gy);
                Vec g(nk);
                g << gx, gy;
                grads.col(static_cast<Eigen::Index>(c)) = g;
            }
            Eigen::JacobiSVD<Mat> svd(grads);
            const auto& sv = svd.singularValues();
            int r = 0;
            if (sv.size() > 0 && sv[0] > 0.0)
                for (Eigen::Index i = 0; i < sv.size(); ++i)
                    if (sv[i] > 1e-8 * sv[0]) ++r;
            report.independent_count = std::max(report.independent_count, r);
        }
    }
    return report;
}

CorrespondenceReport correspondence_check(const StructureConstants& L,
                                          const DualVector& xi0, int base_dim,
                                          const Observable& f, const Observable& h,
                                          double tol, int samples, std::uint32_t seed) {
    if (xi0.size() != L.rank()) throw InputError("correspondence_check: xi0 length");
    AlgebroidSpec spec = fiberwise_product_spec(base_dim, L);
    Observable F = lift_fiber_observable(base_dim, f);
    Observable H = lift_fiber_observable(base_dim, h);

    CorrespondenceReport report;
    report.tol = tol;
    auto rng = make_rng(seed);
    for (int s = 0; s < samples; ++s) {
        DualPoint p{uniform_vec(rng, base_dim, -1.0, 1.0),
                    uniform_vec(rng, L.rank(), -1.0, 1.0)};
        report.product_defect =
            std::max(report.product_defect, std::abs(poisson_bracket(spec, F, H, p)));
        report.fiber_defect =
            std::max(report.fiber_defect, std::abs(kk_bracket(L, f, h, DualVector{p.y})));
    }
    report.product_pass = report.product_defect <= tol;
    report.fiber_pass = report.fiber_defect <= tol;
    return report;
}

namespace {

Observable quadratic_fiber_form(std::string name, int k, const Vec& weights) {
    // sum_a weights[a] y_a^2 with analytic gradient
    Observable obs;
    obs.name = std::move(name);
    Vec w = weights;
    obs.eval = [w](const DualPoint& p) {
        double v = 0.0;
        for (Eigen::Index a = 0; a < w.size(); ++a) v += w[a] * p.y[a] * p.y[a];
        return v;
    };
    obs.grad = [w, k](const DualPoint& p, Vec& gx, Vec& gy) {
        gx = Vec::Zero(0);
        gy = Vec::Zero(k);
        for (Eigen::Index a = 0; a < w.size(); ++a) gy[a] = 2.0 * w[a] * p.y[a];
    };
    return obs;
}

}  // namespace

PresetSystem preset(const std::string& name, const PresetOptions& opts) {
    Vec inertia = opts.inertia.size() == 3 ? opts.inertia : (Vec(3) << 1.0, 2.0, 3.0).finished();
    if (opts.inertia.size() != 0 && opts.inertia.size() != 3)
        throw InputError("preset: inertia must have 3 components");

    if (name == "euler_top") {
        PresetSystem sys;
        sys.name = name;
        CatalogEntry so3 = catalog("so3");
        sys.spec = fiberwise_product_spec(0, so3.constants);

        Vec w = 0.5 * inertia.cwiseInverse();
        sys.hamiltonian = quadratic_fiber_form("H", 3, w);
        sys.z0 = DualPoint{Vec(0), (Vec(3) << 1.0, 0.1, 0.1).finished()};
        sys.integrals = {sys.hamiltonian, quadratic_fiber_form("casimir_yy", 3, Vec::Ones(3))};
        return sys;
    }
    if (name == "e3_kirchhoff") {
        Vec coupling = opts.coupling.size() == 3 ? opts.coupling
                                                 : (Vec(3) << 0.3, 0.2, 0.1).finished();
        if (opts.coupling.size() != 0 && opts.coupling.size() != 3)
            throw InputError("preset: coupling must have 3 components");

        PresetSystem sys;
        sys.name = name;
        CatalogEntry e3 = catalog("e3");
        sys.spec = fiberwise_product_spec(0, e3.constants);

        Vec w = 0.5 * inertia.cwiseInverse();
        Observable H;
        H.name = "H";
        H.eval = [w, coupling](const DualPoint& p) {
            double v = 0.0;
            for (int a = 0; a < 3; ++a) v += w[a] * p.y[a] * p.y[a] + coupling[a] * p.y[3 + a];
            return v;
        };
        H.grad = [w, coupling](const DualPoint& p, Vec& gx, Vec& gy) {
            gx = Vec::Zero(0);
            gy = Vec::Zero(6);
            for (int a = 0; a < 3; ++a) {
                gy[a] = 2.0 * w[a] * p.y[a];
                gy[3 + a] = coupling[a];
            }
        };
        sys.hamiltonian = H;
        sys.z0 = DualPoint{Vec(0), (Vec(6) << 1.0, 0.1, 0.1, 0.2, 0.3, 0.4).finished()};

        Observable pp;
        pp.name = "casimir_pp";
        pp.eval = [](const DualPoint& p) {
            return p.y[3] * p.y[3] + p.y[4] * p.y[4] + p.y[5] * p.y[5];
        };
        pp.grad = [](const DualPoint& p, Vec& gx, Vec& gy) {
            gx = Vec::Zero(0);
            gy = Vec::Zero(6);
            for (int a = 0; a < 3; ++a) gy[3 + a] = 2.0 * p.y[3 + a];
        };
        Observable yp;
        yp.name = "casimir_yp";
        yp.eval = [](const DualPoint& p) {
            return p.y[0] * p.y[3] + p.y[1] * p.y[4] + p.y[2] * p.y[5];
        };
        yp.grad = [](const DualPoint& p, Vec& gx, Vec& gy) {
            gx = Vec::Zero(0);
            gy = Vec::Zero(6);
            for (int a = 0; a < 3; ++a) {
                gy[a] = p.y[3 + a];
                gy[3 + a] = p.y[a];
            }
        };
        sys.integrals = {sys.hamiltonian, pp, yp};
        return sys;
    }
    throw InputError("preset: unknown system '" + name + "'");
}

}  // namespace coadjoint
