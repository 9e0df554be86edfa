#include "coadjoint/lie_poisson.hpp"

#include <cmath>

namespace coadjoint {

void observable_gradient(const Observable& F, const DualPoint& at, Vec& grad_x,
                         Vec& grad_y) {
    if (F.grad) {
        F.grad(at, grad_x, grad_y);
        return;
    }
    const double h = F.fd_step;
    grad_x.resize(at.x.size());
    grad_y.resize(at.y.size());
    DualPoint p = at;
    for (Eigen::Index i = 0; i < at.x.size(); ++i) {
        const double x0 = at.x[i];
        p.x[i] = x0 + h;
        const double fp = F.eval(p);
        p.x[i] = x0 - h;
        const double fm = F.eval(p);
        p.x[i] = x0;
        grad_x[i] = (fp - fm) / (2.0 * h);
    }
    for (Eigen::Index a = 0; a < at.y.size(); ++a) {
        const double y0 = at.y[a];
        p.y[a] = y0 + h;
        const double fp = F.eval(p);
        p.y[a] = y0 - h;
        const double fm = F.eval(p);
        p.y[a] = y0;
        grad_y[a] = (fp - fm) / (2.0 * h);
    }
}

double validate_gradient(const Observable& F, int n, int k, std::uint32_t seed) {
    if (!F.grad) return 0.0;
    Observable numeric = F;
    numeric.grad = nullptr;
    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < 10; ++s) {
        DualPoint p{uniform_vec(rng, n, -1.0, 1.0), uniform_vec(rng, k, -1.0, 1.0)};
        Vec ax, ay, nx, ny;
        observable_gradient(F, p, ax, ay);
        observable_gradient(numeric, p, nx, ny);
        if (n > 0) defect = std::max(defect, (ax - nx).cwiseAbs().maxCoeff());
        if (k > 0) defect = std::max(defect, (ay - ny).cwiseAbs().maxCoeff());
    }
    return defect;
}

Observable polynomial_observable(std::string name, int n, int k,
                                 std::vector<Monomial> terms) {
    for (const auto& t : terms)
        if (static_cast<int>(t.x_pow.size()) != n || static_cast<int>(t.y_pow.size()) != k)
            throw InputError("polynomial_observable: exponent lengths must be n and k");

    auto power = [](double v, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= v;
        return r;
    };
    Observable obs;
    obs.name = std::move(name);
    obs.eval = [terms, power](const DualPoint& p) {
        double total = 0.0;
        for (const auto& t : terms) {
            double v = t.coeff;
            for (std::size_t i = 0; i < t.x_pow.size(); ++i) v *= power(p.x[i], t.x_pow[i]);
            for (std::size_t a = 0; a < t.y_pow.size(); ++a) v *= power(p.y[a], t.y_pow[a]);
            total += v;
        }
        return total;
    };
    obs.grad = [terms, power, n, k](const DualPoint& p, Vec& gx, Vec& gy) {
        gx = Vec::Zero(n);
        gy = Vec::Zero(k);
        for (const auto& t : terms) {
            for (int d = 0; d < n + k; ++d) {
                const bool on_x = d < n;
                const int e = on_x ? t.x_pow[d] : t.y_pow[d - n];
                if (e == 0) continue;
                double v = t.coeff * e;
                for (int i = 0; i < n; ++i)
                    v *= power(p.x[i], (on_x && i == d) ? t.x_pow[i] - 1 : t.x_pow[i]);
                for (int a = 0; a < k; ++a)
                    v *= power(p.y[a], (!on_x && a == d - n) ? t.y_pow[a] - 1 : t.y_pow[a]);
                if (on_x)
                    gx[d] += v;
                else
                    gy[d - n] += v;
            }
        }
    };
    return obs;
}

Observable coordinate_observable(int n, int k, int index) {
    if (index < 0 || index >= n + k) throw InputError("coordinate_observable: index");
    std::string name = index < n ? "x_" + std::to_string(index)
                                 : "y_" + std::to_string(index - n);
    Observable obs;
    obs.name = std::move(name);
    obs.eval = [n, index](const DualPoint& p) {
        return index < n ? p.x[index] : p.y[index - n];
    };
    obs.grad = [n, k, index](const DualPoint&, Vec& gx, Vec& gy) {
        gx = Vec::Zero(n);
        gy = Vec::Zero(k);
        if (index < n)
            gx[index] = 1.0;
        else
            gy[index - n] = 1.0;
    };
    return obs;
}

Mat bivector(const AlgebroidSpec& spec, const DualPoint& at) {
    const int n = spec.base_dim, k = spec.rank;
    if (at.x.size() != n || at.y.size() != k)
        throw InputError("bivector: point dimensions do not match the spec");
    Mat Pi = Mat::Zero(n + k, n + k);
    Mat rho = spec.anchor(at.x);  // k x n, (a, i) = rho^i_a
    Pi.topRightCorner(n, k) = rho.transpose();
    Pi.bottomLeftCorner(k, n) = -rho;
    StructureConstants C = spec.structure(at.x);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double v = 0.0;
            for (int g = 0; g < k; ++g) v -= C.c(a, b, g) * at.y[g];
            Pi(n + a, n + b) = v;
        }
    return Pi;
}

namespace {

Vec full_gradient(const Observable& F, const DualPoint& at) {
    Vec gx, gy;
    observable_gradient(F, at, gx, gy);
    Vec g(gx.size() + gy.size());
    g << gx, gy;
    return g;
}

}  // namespace

double poisson_bracket(const AlgebroidSpec& spec, const Observable& F,
                       const Observable& G, const DualPoint& at) {
    return full_gradient(F, at).dot(bivector(spec, at) * full_gradient(G, at));
}

PhaseVelocity hamiltonian_vector_field(const AlgebroidSpec& spec, const Observable& H,
                                       const DualPoint& at) {
    const int n = spec.base_dim, k = spec.rank;
    if (at.x.size() != n || at.y.size() != k)
        throw InputError("hamiltonian_vector_field: point dimensions");
    Vec gx, gy;
    observable_gradient(H, at, gx, gy);

    Mat rho = spec.anchor(at.x);
    StructureConstants C = spec.structure(at.x);
    PhaseVelocity vel;
    vel.dx = rho.transpose() * gy;
    vel.dy = -(rho * gx);
    for (int a = 0; a < k; ++a) {
        double w = 0.0;
        for (int b = 0; b < k; ++b) {
            if (gy[b] == 0.0) continue;
            for (int g = 0; g < k; ++g) w += gy[b] * C.c(a, b, g) * at.y[g];
        }
        vel.dy[a] -= w;
    }

    // The coordinate expression and Pi * grad H are the same field; a gap here
    // means the bivector and the equations of motion have drifted apart.
    Vec grad(n + k);
    grad << gx, gy;
    Vec via_bivector = bivector(spec, at) * grad;
    Vec direct(n + k);
    direct << vel.dx, vel.dy;
    const double gap = (via_bivector - direct).cwiseAbs().maxCoeff();
    if (gap > 1e-10 * std::max(1.0, direct.cwiseAbs().maxCoeff()))
        throw std::logic_error("hamiltonian_vector_field: bivector route disagrees");
    return vel;
}

double jacobi_check(const AlgebroidSpec& spec,
                    const std::vector<std::array<Observable, 3>>& triples,
                    int samples, std::uint32_t seed, double outer_step) {
    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        DualPoint p{uniform_vec(rng, spec.base_dim, -1.0, 1.0),
                    uniform_vec(rng, spec.rank, -1.0, 1.0)};
        for (const auto& t : triples) {
            auto nested = [&](const Observable& A, const Observable& B,
                              const Observable& Cc) {
                Observable inner;
                inner.name = "{" + A.name + "," + B.name + "}";
                inner.fd_step = outer_step;
                inner.eval = [&spec, &A, &B](const DualPoint& q) {
                    return poisson_bracket(spec, A, B, q);
                };
                return poisson_bracket(spec, inner, Cc, p);
            };
            const double r = nested(t[0], t[1], t[2]) + nested(t[1], t[2], t[0]) +
                             nested(t[2], t[0], t[1]);
            defect = std::max(defect, std::abs(r));
        }
    }
    return defect;
}

double casimir_check(const AlgebroidSpec& spec, const Observable& F, int samples,
                     std::uint32_t seed) {
    const int n = spec.base_dim, k = spec.rank;
    std::vector<Observable> coords;
    for (int i = 0; i < n + k; ++i) coords.push_back(coordinate_observable(n, k, i));
    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        DualPoint p{uniform_vec(rng, n, -1.0, 1.0), uniform_vec(rng, k, -1.0, 1.0)};
        for (const auto& z : coords)
            defect = std::max(defect, std::abs(poisson_bracket(spec, F, z, p)));
    }
    return defect;
}

double kk_bracket(const StructureConstants& L, const Observable& f,
                  const Observable& g, const DualVector& xi) {
    if (xi.size() != L.rank()) throw InputError("kk_bracket: xi length");
    DualPoint p{Vec(0), xi.coeffs};
    Vec fx, fy, gx, gy;
    observable_gradient(f, p, fx, fy);
    observable_gradient(g, p, gx, gy);
    const int k = L.rank();
    double total = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            if (fy[a] == 0.0 || gy[b] == 0.0) continue;
            for (int gg = 0; gg < k; ++gg)
                total -= fy[a] * gy[b] * L.c(a, b, gg) * xi.coeffs[gg];
        }
    return total;
}

AlgebroidSpec fiberwise_product_spec(int base_dim, const StructureConstants& L) {
    AlgebroidSpec spec;
    spec.base_dim = base_dim;
    spec.rank = L.rank();
    spec.kind = AlgebroidKind::coadjoint;
    spec.const_anchor = Mat::Zero(L.rank(), base_dim);
    spec.const_structure = L;
    return spec;
}

Observable lift_fiber_observable(int base_dim, const Observable& f) {
    Observable F;
    F.name = f.name;
    F.fd_step = f.fd_step;
    F.eval = [f](const DualPoint& p) { return f.eval(DualPoint{Vec(0), p.y}); };
    if (f.grad) {
        F.grad = [f, base_dim](const DualPoint& p, Vec& gx, Vec& gy) {
            gx = Vec::Zero(base_dim);
            Vec fx;
            f.grad(DualPoint{Vec(0), p.y}, fx, gy);
        };
    }
    return F;
}

double product_bracket_check(const StructureConstants& L, const DualVector& xi0,
                             int base_dim, const Observable& f, const Observable& h,
                             int samples, std::uint32_t seed) {
    if (xi0.size() != L.rank()) throw InputError("product_bracket_check: xi0 length");
    AlgebroidSpec spec = fiberwise_product_spec(base_dim, L);
    Observable F = lift_fiber_observable(base_dim, f);
    Observable H = lift_fiber_observable(base_dim, h);
    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        DualPoint p{uniform_vec(rng, base_dim, -1.0, 1.0),
                    uniform_vec(rng, L.rank(), -1.0, 1.0)};
        const double product = poisson_bracket(spec, F, H, p);
        const double fiber = kk_bracket(L, f, h, DualVector{p.y});
        defect = std::max(defect, std::abs(product - fiber));
    }
    return defect;
}

}  // namespace coadjoint
