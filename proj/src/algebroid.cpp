#include "coadjoint/algebroid.hpp"

#include <json.hpp>

#include <cmath>

namespace coadjoint {

AlgebroidSpec trivial_algebroid(int base_dim, const StructureConstants& L) {
    if (base_dim < 0) throw InputError("trivial_algebroid: base_dim must be >= 0");
    const int n = base_dim, k = L.rank();
    AlgebroidSpec spec;
    spec.base_dim = n;
    spec.rank = n + k;
    spec.kind = AlgebroidKind::trivial;
    spec.const_anchor = Mat::Zero(n + k, n);
    spec.const_anchor.topLeftCorner(n, n) = Mat::Identity(n, n);
    StructureConstants C(n + k);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            for (int g = 0; g < k; ++g)
                if (L.c(a, b, g) != 0.0) C.set_pair(n + a, n + b, n + g, L.c(a, b, g));
    spec.const_structure = std::move(C);
    return spec;
}

CoadjointGenerators coadjoint_generators(const StructureConstants& L,
                                         const DualVector& xi0) {
    CoadjointGenerators out;
    out.generators = coad_generator_matrix(L, xi0);
    out.rank = orbit_dimension(L, xi0);
    return out;
}

AlgebroidSpec coadjoint_algebroid(int base_dim, const StructureConstants& L,
                                  const DualVector& xi0) {
    CoadjointGenerators gen = coadjoint_generators(L, xi0);
    if (gen.rank == 0)
        throw DegenerateInputError(
            "coadjoint_algebroid: every generator ad*_{e_a} xi0 vanishes (zero orbit)");
    AlgebroidSpec spec;
    spec.base_dim = base_dim;
    spec.rank = L.rank();
    spec.kind = AlgebroidKind::coadjoint;
    spec.const_anchor = Mat::Zero(L.rank(), base_dim);
    spec.const_structure = L;
    return spec;
}

AlgebraVector section_bracket(const AlgebroidSpec& spec, const Section& X,
                              const Section& Y, const Vec& x, double h) {
    if (x.size() != spec.base_dim) throw InputError("section_bracket: base point size");
    const int k = spec.rank;
    Vec Xx = X.eval(x).coeffs, Yx = Y.eval(x).coeffs;
    if (Xx.size() != k || Yx.size() != k)
        throw InputError("section_bracket: section coefficient length");

    StructureConstants C = spec.structure(x);
    Vec out = Vec::Zero(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            const double xy = Xx[a] * Yx[b];
            if (xy == 0.0) continue;
            for (int g = 0; g < k; ++g) out[g] += C.c(a, b, g) * xy;
        }

    Mat rho = spec.anchor(x);  // k x n
    Vec vX = rho.transpose() * Xx;
    Vec vY = rho.transpose() * Yx;
    if (vX.size() > 0 && vX.cwiseAbs().maxCoeff() > 0.0)
        out += (Y.eval(x + h * vX).coeffs - Y.eval(x - h * vX).coeffs) / (2.0 * h);
    if (vY.size() > 0 && vY.cwiseAbs().maxCoeff() > 0.0)
        out -= (X.eval(x + h * vY).coeffs - X.eval(x - h * vY).coeffs) / (2.0 * h);
    return AlgebraVector{out};
}

double leibniz_check(const AlgebroidSpec& spec, const Section& X, const Section& Y,
                     const std::function<double(const Vec&)>& f, int samples,
                     std::uint32_t seed, double h) {
    auto rng = make_rng(seed);
    Section fY{[&f, &Y](const Vec& x) {
        return AlgebraVector{f(x) * Y.eval(x).coeffs};
    }};
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vec x = uniform_vec(rng, spec.base_dim, -1.0, 1.0);
        Vec lhs = section_bracket(spec, X, fY, x, h).coeffs;
        Vec rho_X = spec.anchor(x).transpose() * X.eval(x).coeffs;
        double df = 0.0;
        if (rho_X.size() > 0 && rho_X.cwiseAbs().maxCoeff() > 0.0)
            df = (f(x + h * rho_X) - f(x - h * rho_X)) / (2.0 * h);
        Vec rhs = f(x) * section_bracket(spec, X, Y, x, h).coeffs + df * Y.eval(x).coeffs;
        defect = std::max(defect, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return defect;
}

StructureEqualityReport structure_equality_check(const StructureConstants& L,
                                                 const DualVector& xi0) {
    const int k = L.rank();
    CoadjointGenerators gen = coadjoint_generators(L, xi0);

    StructureEqualityReport report;
    report.generator_rank = gen.rank;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            Vec via_contraction = Vec::Zero(k);
            for (int g = 0; g < k; ++g)
                via_contraction += L.c(a, b, g) * gen.generators.col(g);
            Vec via_bracket =
                coad_apply(L, bracket(L, basis_vector(k, a), basis_vector(k, b)), xi0).coeffs;
            report.max_defect =
                std::max(report.max_defect, (via_contraction - via_bracket).cwiseAbs().maxCoeff());
        }
    report.certified = (gen.rank == k) && report.max_defect <= 1e-12;
    return report;
}

double invariant_field_check(const StructureConstants& L, const MatrixRep& rep,
                             const DualVector& xi0, const AlgebraVector& X,
                             int samples, std::uint32_t seed, double h) {
    if (X.size() != L.rank()) throw InputError("invariant_field_check: X length");
    auto rng = make_rng(seed);
    Mat Xmat = rep_matrix(rep, X);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        GroupElement a = exp_matrix(rep_matrix(rep, AlgebraVector{uniform_vec(rng, L.rank(), -1.0, 1.0)}));
        // pushforward of the right-invariant field t -> exp(t X) a through Ad*_. xi0
        GroupElement plus = GroupElement{exp_matrix(h * Xmat).matrix * a.matrix};
        GroupElement minus = GroupElement{exp_matrix(-h * Xmat).matrix * a.matrix};
        Vec lhs = (big_coad(rep, plus, xi0).coeffs - big_coad(rep, minus, xi0).coeffs) / (2.0 * h);
        Vec rhs = coad_apply(L, X, big_coad(rep, a, xi0)).coeffs;
        defect = std::max(defect, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return defect;
}

std::string algebroid_to_json(const AlgebroidSpec& spec) {
    if (!spec.constant())
        throw InputError("algebroid_to_json: only constant-structure specs serialize");
    nlohmann::json j;
    j["n"] = spec.base_dim;
    j["k"] = spec.rank;
    nlohmann::json anchor = nlohmann::json::array();
    for (int a = 0; a < spec.rank; ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < spec.base_dim; ++i) row.push_back(spec.const_anchor(a, i));
        anchor.push_back(row);
    }
    j["anchor"] = anchor;
    const StructureConstants& C = *spec.const_structure;
    nlohmann::json entries = nlohmann::json::array();
    for (int a = 0; a < spec.rank; ++a)
        for (int b = a + 1; b < spec.rank; ++b)
            for (int g = 0; g < spec.rank; ++g)
                if (C.c(a, b, g) != 0.0) entries.push_back({a, b, g, C.c(a, b, g)});
    j["c"] = entries;
    return j.dump();
}

AlgebroidSpec algebroid_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("algebroid_from_json: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("k") || !j.contains("anchor") || !j.contains("c"))
        throw InputError("algebroid_from_json: need fields n, k, anchor, c");
    AlgebroidSpec spec;
    spec.base_dim = j["n"].get<int>();
    spec.rank = j["k"].get<int>();
    spec.kind = AlgebroidKind::custom;
    if (spec.rank <= 0 || spec.base_dim < 0)
        throw InputError("algebroid_from_json: bad dimensions");
    spec.const_anchor = Mat::Zero(spec.rank, spec.base_dim);
    const auto& anchor = j["anchor"];
    if (static_cast<int>(anchor.size()) != spec.rank)
        throw InputError("algebroid_from_json: anchor must have k rows");
    for (int a = 0; a < spec.rank; ++a) {
        if (static_cast<int>(anchor[a].size()) != spec.base_dim)
            throw InputError("algebroid_from_json: anchor row length");
        for (int i = 0; i < spec.base_dim; ++i)
            spec.const_anchor(a, i) = anchor[a][i].get<double>();
    }
    StructureConstants C(spec.rank);
    for (const auto& e : j["c"]) {
        if (!e.is_array() || e.size() != 4)
            throw InputError("algebroid_from_json: c entries must be [a, b, g, value]");
        int a = e[0].get<int>(), b = e[1].get<int>(), g = e[2].get<int>();
        if (a < 0 || b <= a || b >= spec.rank || g < 0 || g >= spec.rank)
            throw InputError("algebroid_from_json: c index out of range or a >= b");
        C.set_pair(a, b, g, e[3].get<double>());
    }
    spec.const_structure = std::move(C);
    return spec;
}

}  // namespace coadjoint
