#include "coadjoint/groupoid.hpp"

#include <json.hpp>

#include <cmath>

namespace coadjoint {

namespace {

// Element layout for the trivial chart: [p (nb) | a (m*m, column-major) | q (nb)].
Vec pack_triple(const Vec& p, const Mat& a, const Vec& q) {
    const Eigen::Index nb = p.size(), mm = a.size();
    Vec e(2 * nb + mm);
    e.head(nb) = p;
    e.segment(nb, mm) = Eigen::Map<const Vec>(a.data(), mm);
    e.tail(nb) = q;
    return e;
}

Mat middle_matrix(const Vec& e, int nb, Eigen::Index m) {
    return Eigen::Map<const Mat>(e.segment(nb, m * m).data(), m, m);
}

Mat invert(const Mat& g) {
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible()) throw InputError("groupoid element has singular witness");
    return lu.inverse();
}

// Ad*_w xi0 with lenient basis expansion, usable at finite-difference probe
// points that sit slightly off the group manifold.
Vec coad_of_matrix(const MatrixRep& rep, const Mat& w, const Vec& xi0) {
    Mat winv = invert(w);
    const int k = rep.rank();
    Vec eta(k);
    for (int a = 0; a < k; ++a) {
        AlgebraVector col = expand_in_basis(rep, winv * rep.basis[a] * w, 1e-9, false);
        eta[a] = xi0.dot(col.coeffs);
    }
    return eta;
}

GroupoidChart make_triple_chart(int base_dim, const MatrixRep& rep) {
    if (base_dim < 0) throw InputError("groupoid chart: base_dim must be >= 0");
    GroupoidChart G;
    const Eigen::Index m = rep.dim;
    const int nb = base_dim;
    G.base_dim = nb;
    G.elem_dim = 2 * nb + static_cast<int>(m * m);

    G.source = [nb](const Vec& e) { return Vec(e.tail(nb)); };
    G.target = [nb](const Vec& e) { return Vec(e.head(nb)); };
    G.unit = [nb, m](const Vec& p) { return pack_triple(p, Mat::Identity(m, m), p); };
    G.inverse = [nb, m](const Vec& e) {
        return pack_triple(e.tail(nb), invert(middle_matrix(e, nb, m)), e.head(nb));
    };
    G.multiply = [nb, m](const Vec& g, const Vec& h) {
        return pack_triple(g.head(nb), middle_matrix(g, nb, m) * middle_matrix(h, nb, m),
                           h.tail(nb));
    };

    G.sample_base = [nb](std::mt19937& rng) { return uniform_vec(rng, nb, -1.0, 1.0); };
    G.sample_arrow_with_target = [rep, nb](const Vec& t, std::mt19937& rng) {
        AlgebraVector X{uniform_vec(rng, rep.rank(), -1.0, 1.0)};
        Vec q = uniform_vec(rng, nb, -1.0, 1.0);
        return pack_triple(t, exp_matrix(rep_matrix(rep, X)).matrix, q);
    };
    G.sample_isotropy = [rep](const Vec& p, std::mt19937& rng) {
        AlgebraVector X{uniform_vec(rng, rep.rank(), -1.0, 1.0)};
        return pack_triple(p, exp_matrix(rep_matrix(rep, X)).matrix, p);
    };
    G.sample_tangent = [rep, nb, m](const Vec& e, std::mt19937& rng) {
        AlgebraVector V{uniform_vec(rng, rep.rank(), -1.0, 1.0)};
        Mat da = rep_matrix(rep, V) * middle_matrix(e, nb, m);
        return pack_triple(uniform_vec(rng, nb, -1.0, 1.0), da,
                           uniform_vec(rng, nb, -1.0, 1.0));
    };

    G.target_block_offset = 0;
    G.target_block_size = nb;
    return G;
}

}  // namespace

GroupoidChart make_trivial_groupoid(int base_dim, const MatrixRep& rep) {
    GroupoidChart G = make_triple_chart(base_dim, rep);
    G.kind = GroupoidChart::Kind::trivial;
    return G;
}

GroupoidChart make_coadjoint_groupoid(int base_dim, const MatrixRep& rep,
                                      const DualVector& xi0) {
    if (xi0.size() != rep.rank())
        throw InputError("make_coadjoint_groupoid: xi0 length does not match rank");
    GroupoidChart G = make_triple_chart(base_dim, rep);
    G.kind = GroupoidChart::Kind::coadjoint;
    const Eigen::Index m = rep.dim;
    const int nb = base_dim;
    Vec xi = xi0.coeffs;
    G.display = [rep, nb, m, xi](const Vec& e) {
        Vec d(2 * nb + rep.rank());
        d.head(nb) = e.head(nb);
        d.segment(nb, rep.rank()) = coad_of_matrix(rep, middle_matrix(e, nb, m), xi);
        d.tail(nb) = e.tail(nb);
        return d;
    };
    return G;
}

double AxiomReport::max_residual() const {
    double r = 0.0;
    for (const auto& a : axioms) r = std::max(r, a.max_residual);
    return r;
}

const AxiomResidual& AxiomReport::operator[](const std::string& name) const {
    for (const auto& a : axioms)
        if (a.axiom == name) return a;
    throw InputError("axiom report: no axiom named '" + name + "'");
}

std::string AxiomReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : axioms)
        arr.push_back({{"axiom", a.axiom},
                       {"max_residual", a.max_residual},
                       {"samples", samples},
                       {"seed", seed}});
    return arr.dump(2);
}

AxiomReport axioms_check(const GroupoidChart& G, int samples, std::uint32_t seed) {
    if (!G.sample_base || !G.sample_arrow_with_target)
        throw SamplerError("axioms_check: chart has no element sampler");
    auto rng = make_rng(seed);

    AxiomReport report;
    report.samples = samples;
    report.seed = seed;
    report.axioms = {{"source_of_product", 0.0}, {"target_of_product", 0.0},
                     {"associativity", 0.0},     {"left_unit", 0.0},
                     {"right_unit", 0.0},        {"inverse_left", 0.0},
                     {"inverse_right", 0.0}};
    auto& ax = report.axioms;

    auto gap = [](const Vec& a, const Vec& b) { return inf_gap(a, b); };

    for (int s = 0; s < samples; ++s) {
        Vec g = G.sample_element(rng);
        Vec h = G.sample_arrow_with_target(G.source(g), rng);
        Vec k = G.sample_arrow_with_target(G.source(h), rng);
        if (!G.composable(g, h) || !G.composable(h, k))
            throw SamplerError("axioms_check: sampler produced a non-composable pair");

        Vec gh = G.multiply(g, h);
        ax[0].max_residual = std::max(ax[0].max_residual, gap(G.source(gh), G.source(h)));
        ax[1].max_residual = std::max(ax[1].max_residual, gap(G.target(gh), G.target(g)));
        ax[2].max_residual = std::max(
            ax[2].max_residual, gap(G.show(G.multiply(gh, k)), G.show(G.multiply(g, G.multiply(h, k)))));
        ax[3].max_residual = std::max(
            ax[3].max_residual, gap(G.show(G.multiply(G.unit(G.target(g)), g)), G.show(g)));
        ax[4].max_residual = std::max(
            ax[4].max_residual, gap(G.show(G.multiply(g, G.unit(G.source(g)))), G.show(g)));
        Vec gi = G.inverse(g);
        ax[5].max_residual = std::max(
            ax[5].max_residual, gap(G.show(G.multiply(gi, g)), G.show(G.unit(G.source(g)))));
        ax[6].max_residual = std::max(
            ax[6].max_residual, gap(G.show(G.multiply(g, gi)), G.show(G.unit(G.target(g)))));
    }
    return report;
}

std::vector<Vec> isotropy_sample(const GroupoidChart& G, const Vec& p, int n,
                                 std::uint32_t seed) {
    if (!G.sample_isotropy)
        throw InputError("isotropy_sample: chart kind has no isotropy parameterization");
    auto rng = make_rng(seed);
    std::vector<Vec> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec e = G.sample_isotropy(p, rng);
        if (inf_gap(G.source(e), p) > 1e-12 || inf_gap(G.target(e), p) > 1e-12)
            throw SamplerError("isotropy_sample: element left the isotropy fiber");
        out.push_back(std::move(e));
    }
    return out;
}

Vec tangent_map(const std::function<Vec(const Vec&)>& f, const Vec& at, const Vec& v,
                double h) {
    if (h <= 0.0) throw InputError("tangent_map: step must be positive");
    return (f(at + h * v) - f(at - h * v)) / (2.0 * h);
}

double tm_coadjoint_pair_defect(const StructureConstants& L, const MatrixRep& rep,
                                const DualVector& xi0, const GroupoidChart& trivial,
                                const Vec& g, const Vec& h_elem, const Vec& X,
                                const Vec& Y, double h) {
    const int nb = trivial.base_dim;
    const Eigen::Index m = rep.dim;
    Vec xi = xi0.coeffs;

    // Pushforward of (X, Y) through (g, h) -> Ad*_{m(g,h)} xi0.
    auto phi_of_product = [&](const Vec& pair) {
        Vec a = pair.head(trivial.elem_dim);
        Vec b = pair.tail(trivial.elem_dim);
        return coad_of_matrix(rep, middle_matrix(trivial.multiply(a, b), nb, m), xi);
    };
    Vec pair(2 * trivial.elem_dim), dir(2 * trivial.elem_dim);
    pair << g, h_elem;
    dir << X, Y;
    Vec lhs = tangent_map(phi_of_product, pair, dir, h);

    // ad*_{Tm(X,Y)} xi at the product: one finite difference for Tm, then the
    // analytic coadjoint operator on its right-logarithmic derivative.
    auto mul = [&](const Vec& v) {
        return trivial.multiply(v.head(trivial.elem_dim), v.tail(trivial.elem_dim));
    };
    Vec tm = tangent_map(mul, pair, dir, h);
    Mat w = middle_matrix(trivial.multiply(g, h_elem), nb, m);
    Mat dw = middle_matrix(tm, nb, m);
    AlgebraVector V = expand_in_basis(rep, dw * invert(w), 1e-9, false);
    Vec rhs = coad_operator(L, V) * coad_of_matrix(rep, w, xi);

    return (lhs - rhs).cwiseAbs().maxCoeff();
}

double tm_coadjoint_check(const StructureConstants& L, const MatrixRep& rep,
                          const DualVector& xi0, int base_dim, int samples,
                          std::uint32_t seed, double h) {
    GroupoidChart G = make_trivial_groupoid(base_dim, rep);
    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vec g = G.sample_element(rng);
        Vec h_elem = G.sample_arrow_with_target(G.source(g), rng);
        Vec X = G.sample_tangent(g, rng);
        Vec Y = G.sample_tangent(h_elem, rng);
        Y.head(base_dim) = X.tail(base_dim);  // T alpha(X) = T beta(Y)
        defect = std::max(defect, tm_coadjoint_pair_defect(L, rep, xi0, G, g, h_elem, X, Y, h));
    }
    return defect;
}

TranslationMaps translations(const GroupoidChart& G, const Vec& gprime) {
    auto source = G.source;
    auto target = G.target;
    auto multiply = G.multiply;
    Vec src = source(gprime);
    Vec tgt = target(gprime);
    double tol = G.tol_base;

    TranslationMaps maps;
    maps.left = [=](const Vec& hprime) {
        if (inf_gap(target(hprime), src) > tol)
            throw FiberMismatchError("left translation: argument not in the beta-fiber");
        Vec out = multiply(gprime, hprime);
        if (inf_gap(target(out), tgt) > 1e-10)
            throw FiberMismatchError("left translation: image left the target fiber");
        return out;
    };
    maps.right = [=](const Vec& hprime) {
        if (inf_gap(source(hprime), tgt) > tol)
            throw FiberMismatchError("right translation: argument not in the alpha-fiber");
        Vec out = multiply(hprime, gprime);
        if (inf_gap(source(out), src) > 1e-10)
            throw FiberMismatchError("right translation: image left the source fiber");
        return out;
    };
    return maps;
}

WitnessAudit coadjoint_witness_audit(const StructureConstants& L, const MatrixRep& rep,
                                     const DualVector& xi0, int samples,
                                     std::uint32_t seed) {
    Mat kernel = stabilizer_kernel(L, xi0);
    WitnessAudit audit;
    if (kernel.cols() == 0) return audit;

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int s = 0; s < samples; ++s) {
        Mat a = exp_matrix(rep_matrix(rep, AlgebraVector{uniform_vec(rng, L.rank(), -1.0, 1.0)})).matrix;
        Mat b = exp_matrix(rep_matrix(rep, AlgebraVector{uniform_vec(rng, L.rank(), -1.0, 1.0)})).matrix;
        Vec z = Vec::Zero(L.rank());
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) z += dist(rng) * kernel.col(c);
        Mat stab = exp_matrix(rep_matrix(rep, AlgebraVector{z})).matrix;

        Vec base = coad_of_matrix(rep, a * b, xi0.coeffs);
        Vec first = coad_of_matrix(rep, a * stab * b, xi0.coeffs);
        Vec second = coad_of_matrix(rep, a * b * stab, xi0.coeffs);
        audit.first_factor_defect =
            std::max(audit.first_factor_defect, (first - base).cwiseAbs().maxCoeff());
        audit.second_factor_defect =
            std::max(audit.second_factor_defect, (second - base).cwiseAbs().maxCoeff());
    }
    return audit;
}

}  // namespace coadjoint
