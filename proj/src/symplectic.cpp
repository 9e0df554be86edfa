#include "coadjoint/symplectic.hpp"

#include <json.hpp>

#include <cmath>

namespace coadjoint {

double kks_form(const StructureConstants& L, const DualVector& xi,
                const AlgebraVector& X, const AlgebraVector& Y) {
    return xi.coeffs.dot(bracket(L, X, Y).coeffs);
}

NondegeneracyReport orbit_nondegeneracy(const StructureConstants& L,
                                        const DualVector& xi, double tol) {
    const int k = L.rank();
    Mat G(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            G(a, b) = kks_form(L, xi, basis_vector(k, a), basis_vector(k, b));

    NondegeneracyReport report;
    Eigen::JacobiSVD<Mat> svd(G);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0 && sv[0] > 0.0)
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > tol * sv[0]) ++report.gram_rank;
    report.orbit_dim = orbit_dimension(L, xi, tol);
    report.ok = report.gram_rank == report.orbit_dim;
    return report;
}

OrbitTangent orbit_tangent(const StructureConstants& L, const DualVector& xi,
                           const AlgebraVector& X) {
    return OrbitTangent{coad_apply(L, X, xi), X};
}

double PullbackForm::eval(const DualVector& xi_at, const OrbitTangent& u,
                          const OrbitTangent& v) const {
    if (u.rep.size() != constants.rank() || v.rep.size() != constants.rank())
        throw InputError("pullback form: orbit tangent is missing its representative");
    return omega(xi_at, u.rep, v.rep);
}

double PullbackForm::audit_spread(const DualVector& xi_at, int samples,
                                  std::uint32_t seed) const {
    Mat kernel = stabilizer_kernel(constants, xi_at);
    if (kernel.cols() == 0) return 0.0;
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int k = constants.rank();
    double spread = 0.0;
    for (int s = 0; s < samples; ++s) {
        AlgebraVector X{uniform_vec(rng, k, -1.0, 1.0)};
        AlgebraVector Y{uniform_vec(rng, k, -1.0, 1.0)};
        Vec z1 = Vec::Zero(k), z2 = Vec::Zero(k);
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
            z1 += dist(rng) * kernel.col(c);
            z2 += dist(rng) * kernel.col(c);
        }
        const double base = omega(xi_at, X, Y);
        const double moved =
            omega(xi_at, AlgebraVector{X.coeffs + z1}, AlgebraVector{Y.coeffs + z2});
        spread = std::max(spread, std::abs(moved - base));
    }
    return spread;
}

PullbackForm pullback_form(AlgebraTwoForm omega, const StructureConstants& L,
                           const DualVector& xi0) {
    if (xi0.size() != L.rank()) throw InputError("pullback_form: xi0 length");
    return PullbackForm{std::move(omega), L, xi0};
}

namespace {

Mat invert(const Mat& g) {
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible()) throw InputError("cotangent groupoid: singular group factor");
    return lu.inverse();
}

Vec pack_cot(const Mat& g, const Vec& mu) {
    Vec e(g.size() + mu.size());
    e.head(g.size()) = Eigen::Map<const Vec>(g.data(), g.size());
    e.tail(mu.size()) = mu;
    return e;
}

Mat group_of(const Vec& e, Eigen::Index m) {
    return Eigen::Map<const Mat>(e.head(m * m).data(), m, m);
}

// Ad*_{g^{-1}} mu with lenient expansion (finite-difference probes sit slightly
// off the group manifold).
Vec source_momentum(const MatrixRep& rep, const Mat& g, const Vec& mu) {
    const int k = rep.rank();
    Mat ginv = invert(g);
    Vec out(k);
    for (int a = 0; a < k; ++a) {
        AlgebraVector col = expand_in_basis(rep, g * rep.basis[a] * ginv, 1e-9, false);
        out[a] = mu.dot(col.coeffs);
    }
    return out;
}

}  // namespace

CotangentGroupoid cotangent_groupoid(const MatrixRep& rep, const StructureConstants& L) {
    if (rep.rank() != L.rank()) throw InputError("cotangent_groupoid: rank mismatch");
    if (rep_closure_defect(rep, L) > 1e-9)
        throw RepClosureError("cotangent_groupoid: basis does not close under commutators");
    const Eigen::Index m = rep.dim;
    const int k = rep.rank();
    const int mm = static_cast<int>(m * m);

    GroupoidChart G;
    G.kind = GroupoidChart::Kind::cotangent;
    G.elem_dim = mm + k;
    G.base_dim = k;

    G.source = [rep, m](const Vec& e) {
        return source_momentum(rep, group_of(e, m), e.tail(rep.rank()));
    };
    G.target = [k](const Vec& e) { return Vec(e.tail(k)); };
    G.unit = [m, k](const Vec& mu) { return pack_cot(Mat::Identity(m, m), mu); };
    G.inverse = [rep, m, k](const Vec& e) {
        Mat g = group_of(e, m);
        return pack_cot(invert(g), source_momentum(rep, g, e.tail(k)));
    };
    G.multiply = [m, k](const Vec& a, const Vec& b) {
        return pack_cot(group_of(a, m) * group_of(b, m), a.tail(k));
    };

    G.sample_base = [k](std::mt19937& rng) { return uniform_vec(rng, k, -1.0, 1.0); };
    G.sample_arrow_with_target = [rep](const Vec& mu, std::mt19937& rng) {
        AlgebraVector X{uniform_vec(rng, rep.rank(), -1.0, 1.0)};
        return pack_cot(exp_matrix(rep_matrix(rep, X)).matrix, mu);
    };
    G.sample_tangent = [rep, m, k](const Vec& e, std::mt19937& rng) {
        AlgebraVector V{uniform_vec(rng, rep.rank(), -1.0, 1.0)};
        Mat dg = rep_matrix(rep, V) * group_of(e, m);
        Vec t(e.size());
        t.head(m * m) = Eigen::Map<const Vec>(dg.data(), dg.size());
        t.tail(k) = uniform_vec(rng, k, -1.0, 1.0);
        return t;
    };
    G.target_block_offset = mm;
    G.target_block_size = k;

    TwoFormField omega;
    omega.eval = [rep, L, m, k](const Vec& point, const Vec& u, const Vec& v) {
        Mat ginv = invert(group_of(point, m));
        Vec mu = point.tail(k);
        auto right_log = [&](const Vec& t) {
            Mat dg = Eigen::Map<const Mat>(t.head(m * m).data(), m, m);
            return expand_in_basis(rep, dg * ginv, 1e-9, false);
        };
        AlgebraVector ru = right_log(u), rv = right_log(v);
        Vec dmu_u = u.tail(k), dmu_v = v.tail(k);
        return dmu_v.dot(ru.coeffs) - dmu_u.dot(rv.coeffs) -
               mu.dot(bracket(L, ru, rv).coeffs);
    };
    return CotangentGroupoid{std::move(G), std::move(omega)};
}

double multiplicativity_check(const GroupoidChart& G, const TwoFormField& omega,
                              int samples, std::uint32_t seed, double h) {
    if (!G.sample_base || !G.sample_arrow_with_target || !G.sample_tangent)
        throw SamplerError("multiplicativity_check: chart lacks samplers");
    if (G.target_block_size <= 0)
        throw SamplerError("multiplicativity_check: chart has no target block for matching");

    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vec g = G.sample_element(rng);
        Vec hh = G.sample_arrow_with_target(G.source(g), rng);
        Vec gh = G.multiply(g, hh);

        auto matched_pair = [&](Vec v) {
            Vec w = G.sample_tangent(hh, rng);
            Vec talpha = tangent_map(G.source, g, v, h);
            w.segment(G.target_block_offset, G.target_block_size) = talpha;
            const double mismatch =
                (tangent_map(G.target, hh, w, h) - talpha).cwiseAbs().maxCoeff();
            if (mismatch > 1e-8)
                throw SamplerError("multiplicativity_check: tangent matching failed");
            return w;
        };
        Vec v1 = G.sample_tangent(g, rng), v2 = G.sample_tangent(g, rng);
        Vec w1 = matched_pair(v1), w2 = matched_pair(v2);

        auto product = [&](const Vec& pair) {
            return G.multiply(pair.head(G.elem_dim), pair.tail(G.elem_dim));
        };
        Vec pair(2 * G.elem_dim), d1(2 * G.elem_dim), d2(2 * G.elem_dim);
        pair << g, hh;
        d1 << v1, w1;
        d2 << v2, w2;
        Vec tm1 = tangent_map(product, pair, d1, h);
        Vec tm2 = tangent_map(product, pair, d2, h);

        const double r = omega.eval(gh, tm1, tm2) - omega.eval(g, v1, v2) -
                         omega.eval(hh, w1, w2);
        defect = std::max(defect, std::abs(r));
    }
    return defect;
}

std::string CoadjointMultReport::to_json() const {
    nlohmann::json j;
    j["check"] = "coadjoint_multiplicativity";
    j["max_defect"] = mult_defect;
    j["audit_spread"] = audit_spread;
    j["h"] = h;
    j["samples"] = samples;
    j["seed"] = seed;
    return j.dump(2);
}

CoadjointMultReport coadjoint_multiplicativity_audit(const StructureConstants& L,
                                                     const MatrixRep& rep,
                                                     const DualVector& xi0, int base_dim,
                                                     int samples, std::uint32_t seed,
                                                     double h) {
    GroupoidChart G = make_coadjoint_groupoid(base_dim, rep, xi0);
    const Eigen::Index m = rep.dim;
    const int nb = base_dim;
    Vec xi = xi0.coeffs;

    // Restriction of the cotangent form along g -> (g, xi0), pulled to the
    // coadjoint chart through the witness representatives.
    TwoFormField omega_prime;
    omega_prime.eval = [rep, L, m, nb, xi](const Vec& point, const Vec& u, const Vec& v) {
        Mat w = Eigen::Map<const Mat>(point.segment(nb, m * m).data(), m, m);
        Mat winv = invert(w);
        auto right_log = [&](const Vec& t) {
            Mat dw = Eigen::Map<const Mat>(t.segment(nb, m * m).data(), m, m);
            return expand_in_basis(rep, dw * winv, 1e-9, false);
        };
        return -xi.dot(bracket(L, right_log(u), right_log(v)).coeffs);
    };

    CoadjointMultReport report;
    report.samples = samples;
    report.seed = seed;
    report.h = h;
    report.mult_defect = multiplicativity_check(G, omega_prime, samples, seed, h);

    PullbackForm form = pullback_form(
        [xi, L](const DualVector&, const AlgebraVector& X, const AlgebraVector& Y) {
            return -xi.dot(bracket(L, X, Y).coeffs);
        },
        L, xi0);
    auto rng = make_rng(seed + 1);
    double spread = form.audit_spread(xi0, samples, seed + 1);
    for (int s = 0; s < 5; ++s) {
        GroupElement g = exp_matrix(rep_matrix(rep, AlgebraVector{uniform_vec(rng, L.rank(), -1.0, 1.0)}));
        spread = std::max(spread, form.audit_spread(big_coad(rep, g, xi0), samples, seed + 2 + s));
    }
    report.audit_spread = spread;
    return report;
}

}  // namespace coadjoint
