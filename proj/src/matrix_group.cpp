#include "coadjoint/matrix_group.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace coadjoint {

GroupElement exp_matrix(const Mat& A) {
    if (A.rows() != A.cols()) throw InputError("exp_matrix: matrix must be square");
    if (!A.allFinite()) throw InputError("exp_matrix: non-finite entries");
    const Eigen::Index m = A.rows();

    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm1 > 0.5) s = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    if (s > 60) s = 60;

    Mat B = A / std::ldexp(1.0, s);
    Mat T = Mat::Identity(m, m);
    for (int j = 12; j >= 1; --j) T = Mat::Identity(m, m) + (B * T) / j;
    for (int i = 0; i < s; ++i) T = T * T;
    return GroupElement{T};
}

Mat rep_matrix(const MatrixRep& rep, const AlgebraVector& X) {
    if (X.size() != rep.rank()) throw InputError("rep_matrix: coefficient length");
    Mat M = Mat::Zero(rep.dim, rep.dim);
    for (int a = 0; a < rep.rank(); ++a) M += X.coeffs[a] * rep.basis[a];
    return M;
}

namespace {

Mat basis_columns(const MatrixRep& rep) {
    const Eigen::Index mm = rep.dim * rep.dim;
    Mat B(mm, rep.rank());
    for (int a = 0; a < rep.rank(); ++a)
        B.col(a) = Eigen::Map<const Vec>(rep.basis[a].data(), mm);
    return B;
}

Mat inverse_of(const Mat& g) {
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible()) throw InputError("group element is not invertible");
    return lu.inverse();
}

}  // namespace

AlgebraVector expand_in_basis(const MatrixRep& rep, const Mat& M, double tol,
                              bool strict) {
    if (M.rows() != rep.dim || M.cols() != rep.dim)
        throw InputError("expand_in_basis: matrix size does not match representation");
    Mat B = basis_columns(rep);
    Vec rhs = Eigen::Map<const Vec>(M.data(), rep.dim * rep.dim);
    Vec a = B.colPivHouseholderQr().solve(rhs);
    if (strict) {
        const double resid = (B * a - rhs).cwiseAbs().maxCoeff();
        if (resid > tol * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
            throw RepClosureError("expand_in_basis: residual " + format_double(resid) +
                                  " above threshold; matrix leaves the representation span");
    }
    return AlgebraVector{a};
}

double rep_closure_defect(const MatrixRep& rep, const StructureConstants& L) {
    if (rep.rank() != L.rank())
        throw InputError("rep_closure_defect: rank mismatch");
    double defect = 0.0;
    for (int a = 0; a < rep.rank(); ++a)
        for (int b = 0; b < rep.rank(); ++b) {
            Mat comm = rep.basis[a] * rep.basis[b] - rep.basis[b] * rep.basis[a];
            for (int g = 0; g < rep.rank(); ++g) comm -= L.c(a, b, g) * rep.basis[g];
            defect = std::max(defect, comm.cwiseAbs().maxCoeff());
        }
    return defect;
}

bool rep_basis_independent(const MatrixRep& rep, double rel_tol) {
    Mat B = basis_columns(rep);
    Eigen::JacobiSVD<Mat> svd(B);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return false;
    return sv[sv.size() - 1] > rel_tol * sv[0];
}

AlgebraVector big_ad(const MatrixRep& rep, const GroupElement& g, const AlgebraVector& X) {
    Mat ginv = inverse_of(g.matrix);
    return expand_in_basis(rep, g.matrix * rep_matrix(rep, X) * ginv);
}

DualVector big_coad(const MatrixRep& rep, const GroupElement& g, const DualVector& xi) {
    if (xi.size() != rep.rank()) throw InputError("big_coad: xi length");
    Mat ginv = inverse_of(g.matrix);
    const int k = rep.rank();
    Vec eta(k);
    for (int a = 0; a < k; ++a) {
        // Ad_{g^{-1}} e_a expanded in the basis
        AlgebraVector col = expand_in_basis(rep, ginv * rep.basis[a] * g.matrix);
        eta[a] = xi.coeffs.dot(col.coeffs);
    }
    return DualVector{eta};
}

std::vector<OrbitPoint> orbit_sample(const MatrixRep& rep, const DualVector& xi0,
                                     int n, std::uint32_t seed) {
    if (n < 1) throw InputError("orbit_sample: n must be >= 1");
    auto rng = make_rng(seed);
    std::vector<OrbitPoint> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        AlgebraVector X{uniform_vec(rng, rep.rank(), -2.0, 2.0)};
        GroupElement g = exp_matrix(rep_matrix(rep, X));
        out.push_back(OrbitPoint{big_coad(rep, g, xi0), g, xi0});
    }
    return out;
}

Mat coad_generator_matrix(const StructureConstants& L, const DualVector& xi) {
    if (xi.size() != L.rank()) throw InputError("coad_generator_matrix: xi length");
    const int k = L.rank();
    Mat K(k, k);
    for (int a = 0; a < k; ++a)
        K.col(a) = coad_apply(L, basis_vector(k, a), xi).coeffs;
    return K;
}

int orbit_dimension(const StructureConstants& L, const DualVector& xi, double rel_tol) {
    Mat K = coad_generator_matrix(L, xi);
    Eigen::JacobiSVD<Mat> svd(K);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * sv[0]) ++r;
    return r;
}

Mat stabilizer_kernel(const StructureConstants& L, const DualVector& xi, double rel_tol) {
    Mat K = coad_generator_matrix(L, xi);
    Eigen::JacobiSVD<Mat> svd(K, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int k = L.rank();
    const double cutoff = (sv.size() > 0 && sv[0] > 0.0) ? rel_tol * sv[0] : 0.0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++r;
    return svd.matrixV().rightCols(k - r);
}

bool stabilizer_check(const MatrixRep& rep, const GroupElement& g,
                      const DualVector& xi, double tol) {
    if (tol <= 0.0) throw InputError("stabilizer_check: tol must be positive");
    DualVector moved = big_coad(rep, g, xi);
    return (moved.coeffs - xi.coeffs).cwiseAbs().maxCoeff() <= tol;
}

std::string orbit_csv(const std::vector<OrbitPoint>& points) {
    std::ostringstream os;
    if (points.empty()) return "";
    const Eigen::Index k = points.front().xi.size();
    for (Eigen::Index a = 0; a < k; ++a) os << (a ? "," : "") << "xi_" << a;
    os << "\n";
    for (const auto& p : points) {
        for (Eigen::Index a = 0; a < k; ++a)
            os << (a ? "," : "") << format_double(p.xi.coeffs[a]);
        os << "\n";
    }
    return os.str();
}

std::string witnesses_json(const std::vector<OrbitPoint>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json m = nlohmann::json::array();
        for (Eigen::Index i = 0; i < p.witness.matrix.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index j = 0; j < p.witness.matrix.cols(); ++j)
                row.push_back(p.witness.matrix(i, j));
            m.push_back(row);
        }
        arr.push_back(m);
    }
    return arr.dump();
}

}  // namespace coadjoint
