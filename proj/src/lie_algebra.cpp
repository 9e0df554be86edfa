#include "coadjoint/lie_algebra.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>

namespace coadjoint {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

StructureConstants::StructureConstants(int rank) : rank_(rank) {
    if (rank <= 0) throw InputError("structure constants: rank must be positive");
    c_.assign(static_cast<std::size_t>(rank) * rank * rank, 0.0);
}

StructureConstants StructureConstants::from_dense(int rank, std::vector<double> c,
                                                  bool antisymmetrize) {
    StructureConstants L(rank);
    if (c.size() != L.c_.size())
        throw InputError("structure constants: dense array has wrong length");
    L.c_ = std::move(c);
    if (antisymmetrize) {
        for (int a = 0; a < rank; ++a)
            for (int b = 0; b < rank; ++b)
                for (int g = 0; g < rank; ++g) {
                    if (a > b) continue;
                    double v = 0.5 * (L.c_[L.idx(a, b, g)] - L.c_[L.idx(b, a, g)]);
                    L.c_[L.idx(a, b, g)] = v;
                    L.c_[L.idx(b, a, g)] = -v;
                }
    } else if (L.antisymmetry_defect() > kTol) {
        throw InputError("structure constants: antisymmetry violated");
    }
    return L;
}

void StructureConstants::set_pair(int a, int b, int g, double v) {
    c_[idx(a, b, g)] = v;
    c_[idx(b, a, g)] = -v;
}

double StructureConstants::antisymmetry_defect() const {
    double d = 0.0;
    for (int a = 0; a < rank_; ++a)
        for (int b = 0; b < rank_; ++b)
            for (int g = 0; g < rank_; ++g)
                d = std::max(d, std::abs(c_[idx(a, b, g)] + c_[idx(b, a, g)]));
    return d;
}

AlgebraVector basis_vector(int rank, int a) {
    Vec v = Vec::Zero(rank);
    v[a] = 1.0;
    return AlgebraVector{v};
}

DualVector dual_basis_vector(int rank, int a) {
    Vec v = Vec::Zero(rank);
    v[a] = 1.0;
    return DualVector{v};
}

namespace {

void require_size(const StructureConstants& L, Eigen::Index n, const char* what) {
    if (n != L.rank())
        throw InputError(std::string(what) + ": length does not match algebra rank");
}

}  // namespace

AlgebraVector bracket(const StructureConstants& L, const AlgebraVector& X,
                      const AlgebraVector& Y) {
    require_size(L, X.size(), "bracket X");
    require_size(L, Y.size(), "bracket Y");
    const int k = L.rank();
    Vec out = Vec::Zero(k);
    for (int a = 0; a < k; ++a) {
        if (X.coeffs[a] == 0.0) continue;
        for (int b = 0; b < k; ++b) {
            if (Y.coeffs[b] == 0.0) continue;
            const double xy = X.coeffs[a] * Y.coeffs[b];
            for (int g = 0; g < k; ++g) out[g] += L.c(a, b, g) * xy;
        }
    }
    return AlgebraVector{out};
}

Mat ad_operator(const StructureConstants& L, const AlgebraVector& X) {
    require_size(L, X.size(), "ad_operator X");
    const int k = L.rank();
    Mat M = Mat::Zero(k, k);
    for (int g = 0; g < k; ++g)
        for (int b = 0; b < k; ++b)
            for (int a = 0; a < k; ++a) M(g, b) += L.c(a, b, g) * X.coeffs[a];
    return M;
}

Mat coad_operator(const StructureConstants& L, const AlgebraVector& X) {
    require_size(L, X.size(), "coad_operator X");
    const int k = L.rank();
    Mat M = Mat::Zero(k, k);
    // (ad*_X xi)_b = sum_{a,g} c(b,a,g) X^a xi_g
    for (int b = 0; b < k; ++b)
        for (int g = 0; g < k; ++g)
            for (int a = 0; a < k; ++a) M(b, g) += L.c(b, a, g) * X.coeffs[a];
    return M;
}

DualVector coad_apply(const StructureConstants& L, const AlgebraVector& X,
                      const DualVector& xi) {
    require_size(L, xi.size(), "coad_apply xi");
    return DualVector{coad_operator(L, X) * xi.coeffs};
}

double jacobi_defect(const StructureConstants& L) {
    const int k = L.rank();
    double defect = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int g = 0; g < k; ++g)
                for (int n = 0; n < k; ++n) {
                    double r = 0.0;
                    for (int m = 0; m < k; ++m)
                        r += L.c(a, b, m) * L.c(m, g, n) + L.c(b, g, m) * L.c(m, a, n) +
                             L.c(g, a, m) * L.c(m, b, n);
                    defect = std::max(defect, std::abs(r));
                }
    return defect;
}

double coad_homomorphism_defect(const StructureConstants& L, int samples,
                                std::uint32_t seed) {
    if (samples < 1) throw InputError("coad_homomorphism_defect: samples must be >= 1");
    const int k = L.rank();
    auto rng = make_rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        AlgebraVector X{uniform_vec(rng, k, -1.0, 1.0)};
        AlgebraVector Y{uniform_vec(rng, k, -1.0, 1.0)};
        Mat lhs = coad_operator(L, bracket(L, X, Y));
        Mat cx = coad_operator(L, X);
        Mat cy = coad_operator(L, Y);
        Mat rhs = cx * cy - cy * cx;
        defect = std::max(defect, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return defect;
}

namespace {

Mat unit_matrix(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
    Mat m = Mat::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

// hat map: hat(e_i)(j, l) = -eps_{ijl}, so [hat(x), hat(y)] = hat(x cross y).
Mat so3_hat(int i) {
    Mat m = Mat::Zero(3, 3);
    auto eps = [](int a, int b, int c) -> double {
        if (a == b || b == c || a == c) return 0.0;
        return ((b - a) % 3 + 3) % 3 == 1 ? 1.0 : -1.0;
    };
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) m(j, l) = -eps(i, j, l);
    return m;
}

// Expands commutators of the basis matrices in the basis itself. Requires the
// basis to be orthogonal under <A, B> = tr(A^T B); all catalog bases are, which
// keeps the derived constants exact for integer matrices.
StructureConstants constants_from_rep(const MatrixRep& rep) {
    const int k = rep.rank();
    std::vector<double> norms(k);
    for (int p = 0; p < k; ++p) {
        for (int q = p + 1; q < k; ++q) {
            if (std::abs((rep.basis[p].transpose() * rep.basis[q]).trace()) > 1e-12)
                throw InputError("constants_from_rep: basis is not trace-orthogonal");
        }
        norms[p] = (rep.basis[p].transpose() * rep.basis[p]).trace();
        if (norms[p] <= 0.0) throw InputError("constants_from_rep: zero basis matrix");
    }
    StructureConstants L(k);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            Mat comm = rep.basis[a] * rep.basis[b] - rep.basis[b] * rep.basis[a];
            for (int g = 0; g < k; ++g) {
                double coeff = (rep.basis[g].transpose() * comm).trace() / norms[g];
                if (coeff != 0.0) L.set_pair(a, b, g, coeff);
            }
        }
    return L;
}

MatrixRep make_so3_rep() {
    MatrixRep rep;
    rep.dim = 3;
    for (int i = 0; i < 3; ++i) rep.basis.push_back(so3_hat(i));
    return rep;
}

MatrixRep make_so4_rep() {
    MatrixRep rep;
    rep.dim = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            rep.basis.push_back(unit_matrix(4, i, j) - unit_matrix(4, j, i));
    return rep;
}

// Real form preserving diag(-1, 1, 1, 1): three spatial rotations, three boosts.
MatrixRep make_so31_rep() {
    MatrixRep rep;
    rep.dim = 4;
    for (int i = 0; i < 3; ++i) {
        Mat m = Mat::Zero(4, 4);
        m.block<3, 3>(1, 1) = so3_hat(i);
        rep.basis.push_back(m);
    }
    for (int i = 1; i <= 3; ++i) {
        Mat m = Mat::Zero(4, 4);
        m(0, i) = 1.0;
        m(i, 0) = 1.0;
        rep.basis.push_back(m);
    }
    return rep;
}

// Affine 4x4: rotations in the top-left block, translations in the last column.
MatrixRep make_e3_rep() {
    MatrixRep rep;
    rep.dim = 4;
    for (int i = 0; i < 3; ++i) {
        Mat m = Mat::Zero(4, 4);
        m.block<3, 3>(0, 0) = so3_hat(i);
        rep.basis.push_back(m);
    }
    for (int i = 0; i < 3; ++i) rep.basis.push_back(unit_matrix(4, i, 3));
    return rep;
}

MatrixRep make_sl2_rep() {
    MatrixRep rep;
    rep.dim = 2;
    rep.basis.push_back(unit_matrix(2, 0, 1));                          // e
    rep.basis.push_back(unit_matrix(2, 1, 0));                          // f
    rep.basis.push_back(unit_matrix(2, 0, 0) - unit_matrix(2, 1, 1));   // h
    return rep;
}

MatrixRep make_heis3_rep() {
    MatrixRep rep;
    rep.dim = 3;
    rep.basis.push_back(unit_matrix(3, 0, 1));
    rep.basis.push_back(unit_matrix(3, 1, 2));
    rep.basis.push_back(unit_matrix(3, 0, 2));
    return rep;
}

MatrixRep make_abelian_rep(int n) {
    MatrixRep rep;
    rep.dim = n;
    for (int i = 0; i < n; ++i) rep.basis.push_back(unit_matrix(n, i, i));
    return rep;
}

CatalogEntry build_entry(const std::string& name, MatrixRep rep) {
    StructureConstants L = constants_from_rep(rep);
    if (jacobi_defect(L) > StructureConstants::kTol)
        throw std::logic_error("catalog: derived constants violate Jacobi for " + name);
    return CatalogEntry{name, std::move(L), std::move(rep)};
}

}  // namespace

CatalogEntry catalog(const std::string& name, std::optional<int> param) {
    if (name == "so3") return build_entry(name, make_so3_rep());
    if (name == "so4") return build_entry(name, make_so4_rep());
    if (name == "so31") return build_entry(name, make_so31_rep());
    if (name == "e3") return build_entry(name, make_e3_rep());
    if (name == "sl2") return build_entry(name, make_sl2_rep());
    if (name == "heis3") return build_entry(name, make_heis3_rep());

    std::smatch m;
    static const std::regex abelian_re(R"(^abelian(?:\((\d+)\))?$)");
    if (std::regex_match(name, m, abelian_re)) {
        int n = 0;
        if (m[1].matched)
            n = std::stoi(m[1].str());
        else if (param)
            n = *param;
        else
            throw InputError("catalog: abelian requires a rank, e.g. abelian(3)");
        if (n <= 0) throw InputError("catalog: abelian rank must be positive");
        return CatalogEntry{"abelian(" + std::to_string(n) + ")",
                            StructureConstants(n), make_abelian_rep(n)};
    }
    throw InputError("catalog: unknown algebra '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"so3", "so4", "so31", "e3", "sl2", "heis3", "abelian(n)"};
}

std::string constants_to_json(const StructureConstants& L) {
    const int k = L.rank();
    nlohmann::json entries = nlohmann::json::array();
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            for (int g = 0; g < k; ++g)
                if (L.c(a, b, g) != 0.0)
                    entries.push_back({a, b, g, L.c(a, b, g)});
    nlohmann::json j;
    j["rank"] = k;
    j["entries"] = entries;
    return j.dump();
}

StructureConstants constants_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("constants_from_json: ") + e.what());
    }
    if (!j.contains("rank") || !j.contains("entries"))
        throw InputError("constants_from_json: need fields 'rank' and 'entries'");
    const int k = j["rank"].get<int>();
    StructureConstants L(k);
    for (const auto& e : j["entries"]) {
        if (!e.is_array() || e.size() != 4)
            throw InputError("constants_from_json: entries must be [a, b, g, value]");
        int a = e[0].get<int>(), b = e[1].get<int>(), g = e[2].get<int>();
        double v = e[3].get<double>();
        if (a < 0 || b < 0 || g < 0 || a >= k || b >= k || g >= k)
            throw InputError("constants_from_json: index out of range");
        if (a >= b) throw InputError("constants_from_json: entries must have a < b");
        L.set_pair(a, b, g, v);
    }
    return L;
}

}  // namespace coadjoint
