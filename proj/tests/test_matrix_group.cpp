#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coadjoint/matrix_group.hpp"

#include <cmath>

using namespace coadjoint;

namespace {

// 200-term Taylor series, summed in plain order; independent of the
// scaling-and-squaring path.
Mat exp_series_oracle(const Mat& A) {
    Mat term = Mat::Identity(A.rows(), A.cols());
    Mat sum = term;
    for (int j = 1; j <= 200; ++j) {
        term = term * A / static_cast<double>(j);
        sum += term;
    }
    return sum;
}

Mat rotation_z(double t) {
    Mat R = Mat::Identity(3, 3);
    R(0, 0) = std::cos(t);
    R(0, 1) = -std::sin(t);
    R(1, 0) = std::sin(t);
    R(1, 1) = std::cos(t);
    return R;
}

}  // namespace

TEST_CASE("exp_matrix: identity, series oracle, rotation, inverse") {
    CHECK((exp_matrix(Mat::Zero(3, 3)).matrix - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

    CatalogEntry so3 = catalog("so3");
    Mat hat3 = so3.rep->basis[2];
    Mat A = 0.7 * hat3;
    Mat viaseries = exp_series_oracle(A);
    CHECK((exp_matrix(A).matrix - viaseries).cwiseAbs().maxCoeff() < 1e-12);

    // exp(t hat(e3)) is the rotation by t about axis 3
    CHECK((exp_matrix(A).matrix - rotation_z(0.7)).cwiseAbs().maxCoeff() < 1e-12);

    auto rng = make_rng(2);
    for (int s = 0; s < 10; ++s) {
        Mat B(3, 3);
        for (int i = 0; i < 9; ++i) B(i / 3, i % 3) = uniform_vec(rng, 1, -2.0, 2.0)[0];
        Mat prod = exp_matrix(B).matrix * exp_matrix(-B).matrix;
        CHECK((prod - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    }

    // large norm goes through repeated squaring and still matches the oracle
    Mat big = 8.0 * hat3;
    CHECK((exp_matrix(big).matrix - rotation_z(8.0)).cwiseAbs().maxCoeff() < 1e-11);

    Mat bad = Mat::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(exp_matrix(bad), InputError);
}

TEST_CASE("catalog representations close under commutators and are independent") {
    for (const char* name : {"so3", "so4", "so31", "e3", "sl2", "heis3", "abelian(3)"}) {
        CatalogEntry entry = catalog(name);
        REQUIRE(entry.rep.has_value());
        CHECK(rep_closure_defect(*entry.rep, entry.constants) <= 1e-12);
        CHECK(rep_basis_independent(*entry.rep));
    }
}

TEST_CASE("big_ad: identity, quarter turn, derivative vs bracket") {
    CatalogEntry so3 = catalog("so3");
    const MatrixRep& rep = *so3.rep;
    AlgebraVector e1 = basis_vector(3, 0);

    GroupElement id{Mat::Identity(3, 3)};
    CHECK((big_ad(rep, id, e1).coeffs - e1.coeffs).cwiseAbs().maxCoeff() < 1e-14);

    // Ad_{exp(hat(e3) pi/2)} e1 -> e2: the rotated basis matrix is hat(R e1)
    GroupElement g = exp_matrix((M_PI / 2.0) * rep.basis[2]);
    Mat rotated = g.matrix * rep.basis[0] * g.matrix.inverse();
    Mat expected_mat = rep.basis[1];  // hat(e2), since R e1 = e2 for the oracle rotation
    CHECK((rotated - expected_mat).cwiseAbs().maxCoeff() < 1e-12);
    Vec ad = big_ad(rep, g, e1).coeffs;
    CHECK(std::abs(ad[1] - 1.0) < 1e-12);
    CHECK(std::abs(ad[0]) < 1e-12);
    CHECK(std::abs(ad[2]) < 1e-12);

    // d/dt Ad_{exp(tX)} Y |_0 = [X, Y] by central differences
    for (const char* name : {"so3", "e3", "sl2", "heis3"}) {
        CatalogEntry entry = catalog(name);
        auto rng = make_rng(9);
        const int k = entry.constants.rank();
        const double h = 1e-5;
        for (int s = 0; s < 10; ++s) {
            AlgebraVector X{uniform_vec(rng, k, -1.0, 1.0)};
            AlgebraVector Y{uniform_vec(rng, k, -1.0, 1.0)};
            Mat Xm = rep_matrix(*entry.rep, X);
            Vec plus = big_ad(*entry.rep, exp_matrix(h * Xm), Y).coeffs;
            Vec minus = big_ad(*entry.rep, exp_matrix(-h * Xm), Y).coeffs;
            Vec deriv = (plus - minus) / (2.0 * h);
            CHECK((deriv - bracket(entry.constants, X, Y).coeffs).cwiseAbs().maxCoeff() < 1e-8);
        }
    }

    // a matrix outside the truncated span is rejected: rotating hat(e2) about
    // axis 1 produces a hat(e3) component that the broken basis cannot absorb
    MatrixRep broken = rep;
    broken.basis.pop_back();
    GroupElement r = exp_matrix(0.5 * rep.basis[0]);
    CHECK_THROWS_AS(big_ad(broken, r, AlgebraVector{(Vec(2) << 0.0, 1.0).finished()}),
                    RepClosureError);
}

TEST_CASE("big_coad: identity, dual rotation, group law") {
    CatalogEntry so3 = catalog("so3");
    const MatrixRep& rep = *so3.rep;
    DualVector xi{(Vec(3) << 1.0, 0.0, 0.0).finished()};

    GroupElement id{Mat::Identity(3, 3)};
    CHECK((big_coad(rep, id, xi).coeffs - xi.coeffs).cwiseAbs().maxCoeff() < 1e-14);

    // Ad*_{exp(hat(e3) t)} rotates xi in the (0,1) dual plane; oracle evaluates
    // <xi, Ad_{g^{-1}} e_a> directly from rotated basis matrices.
    const double t = 0.37;
    GroupElement g = exp_matrix(t * rep.basis[2]);
    Mat ginv = g.matrix.inverse();
    Vec oracle(3);
    for (int a = 0; a < 3; ++a) {
        Mat moved = ginv * rep.basis[a] * g.matrix;
        AlgebraVector coeffs = expand_in_basis(rep, moved);
        oracle[a] = xi.coeffs.dot(coeffs.coeffs);
    }
    Vec eta = big_coad(rep, g, xi).coeffs;
    CHECK((eta - oracle).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(eta[0] == doctest::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(std::abs(eta[2]) < 1e-12);

    auto rng = make_rng(31);
    for (int s = 0; s < 50; ++s) {
        GroupElement a = exp_matrix(rep_matrix(rep, AlgebraVector{uniform_vec(rng, 3, -1.0, 1.0)}));
        GroupElement b = exp_matrix(rep_matrix(rep, AlgebraVector{uniform_vec(rng, 3, -1.0, 1.0)}));
        DualVector z{uniform_vec(rng, 3, -1.0, 1.0)};
        Vec nested = big_coad(rep, a, big_coad(rep, b, z)).coeffs;
        Vec direct = big_coad(rep, GroupElement{a.matrix * b.matrix}, z).coeffs;
        CHECK((nested - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Ad is a group action") {
    CatalogEntry e3 = catalog("e3");
    auto rng = make_rng(13);
    for (int s = 0; s < 50; ++s) {
        GroupElement a = exp_matrix(rep_matrix(*e3.rep, AlgebraVector{uniform_vec(rng, 6, -1.0, 1.0)}));
        GroupElement b = exp_matrix(rep_matrix(*e3.rep, AlgebraVector{uniform_vec(rng, 6, -1.0, 1.0)}));
        AlgebraVector X{uniform_vec(rng, 6, -1.0, 1.0)};
        Vec nested = big_ad(*e3.rep, a, big_ad(*e3.rep, b, X)).coeffs;
        Vec direct = big_ad(*e3.rep, GroupElement{a.matrix * b.matrix}, X).coeffs;
        CHECK((nested - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("derivative of Ad* at the identity is the coadjoint operator") {
    for (const char* name : {"so3", "so4", "so31", "e3", "sl2", "heis3", "abelian(4)"}) {
        CatalogEntry entry = catalog(name);
        const int k = entry.constants.rank();
        auto rng = make_rng(41);
        const double h = 1e-5;
        for (int s = 0; s < 50; ++s) {
            AlgebraVector X{uniform_vec(rng, k, -1.0, 1.0)};
            DualVector xi{uniform_vec(rng, k, -1.0, 1.0)};
            Mat Xm = rep_matrix(*entry.rep, X);
            Vec plus = big_coad(*entry.rep, exp_matrix(h * Xm), xi).coeffs;
            Vec minus = big_coad(*entry.rep, exp_matrix(-h * Xm), xi).coeffs;
            Vec fd = (plus - minus) / (2.0 * h);
            Vec analytic = coad_apply(entry.constants, X, xi).coeffs;
            CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("orbit_sample: Casimir invariance and witnesses") {
    CatalogEntry so3 = catalog("so3");
    DualVector xi0{(Vec(3) << 0.0, 0.0, 1.0).finished()};
    auto points = orbit_sample(*so3.rep, xi0, 50, 7);
    REQUIRE(points.size() == 50);
    for (const auto& p : points) {
        CHECK(std::abs(p.xi.coeffs.norm() - 1.0) < 1e-10);
        // witness reproduces the point
        Vec again = big_coad(*so3.rep, p.witness, p.origin).coeffs;
        CHECK((again - p.xi.coeffs).cwiseAbs().maxCoeff() <= 1e-9);
    }

    // identity witness gives xi0 back
    GroupElement id{Mat::Identity(3, 3)};
    CHECK((big_coad(*so3.rep, id, xi0).coeffs - xi0.coeffs).cwiseAbs().maxCoeff() < 1e-14);

    CatalogEntry e3 = catalog("e3");
    DualVector z0{(Vec(6) << 0.8, -0.3, 0.5, 0.2, 0.7, -0.4).finished()};
    auto e3pts = orbit_sample(*e3.rep, z0, 50, 11);
    auto pp = [](const Vec& v) { return v.tail(3).squaredNorm(); };
    auto yp = [](const Vec& v) { return v.head(3).dot(v.tail(3)); };
    for (const auto& p : e3pts) {
        CHECK(std::abs(pp(p.xi.coeffs) - pp(z0.coeffs)) < 1e-9);
        CHECK(std::abs(yp(p.xi.coeffs) - yp(z0.coeffs)) < 1e-9);
    }

    CHECK_THROWS_AS(orbit_sample(*so3.rep, xi0, 0, 1), InputError);
}

TEST_CASE("orbit_dimension: frozen values and parity") {
    StructureConstants so3 = catalog("so3").constants;
    CHECK(orbit_dimension(so3, DualVector{(Vec(3) << 0.0, 0.0, 1.0).finished()}) == 2);
    CHECK(orbit_dimension(so3, DualVector{Vec::Zero(3)}) == 0);

    StructureConstants e3 = catalog("e3").constants;
    CHECK(orbit_dimension(e3, DualVector{(Vec(6) << 1, 0, 0, 0, 0, 1).finished()}) == 4);

    StructureConstants heis = catalog("heis3").constants;
    CHECK(orbit_dimension(heis, DualVector{(Vec(3) << 0, 0, 1).finished()}) == 2);

    // orbits are symplectic, so dimensions are even; scale invariance in xi
    for (const char* name : {"so3", "so4", "so31", "e3", "sl2", "heis3", "abelian(5)"}) {
        StructureConstants L = catalog(name).constants;
        auto rng = make_rng(3);
        for (int s = 0; s < 100; ++s) {
            DualVector xi{uniform_vec(rng, L.rank(), -1.0, 1.0)};
            const int d = orbit_dimension(L, xi);
            CHECK(d % 2 == 0);
            DualVector scaled{1e6 * xi.coeffs};
            CHECK(orbit_dimension(L, scaled) == d);
        }
    }
}

TEST_CASE("stabilizer_check") {
    CatalogEntry so3 = catalog("so3");
    DualVector xi{(Vec(3) << 0.0, 0.0, 1.0).finished()};
    GroupElement id{Mat::Identity(3, 3)};
    CHECK(stabilizer_check(*so3.rep, id, xi, 1e-12));
    for (double theta : {0.3, 1.7, -2.5}) {
        GroupElement g = exp_matrix(theta * so3.rep->basis[2]);
        CHECK(stabilizer_check(*so3.rep, g, xi, 1e-10));
    }
    GroupElement off = exp_matrix(0.5 * so3.rep->basis[0]);
    CHECK_FALSE(stabilizer_check(*so3.rep, off, xi, 1e-6));
    CHECK_THROWS_AS(stabilizer_check(*so3.rep, id, xi, 0.0), InputError);
}

TEST_CASE("stabilizer_kernel spans the stabilizer directions") {
    StructureConstants so3 = catalog("so3").constants;
    DualVector xi{(Vec(3) << 0.0, 0.0, 1.0).finished()};
    Mat kernel = stabilizer_kernel(so3, xi);
    REQUIRE(kernel.cols() == 1);
    // the kernel direction is the e3 axis
    CHECK(std::abs(std::abs(kernel(2, 0)) - 1.0) < 1e-12);
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
        CHECK(coad_apply(so3, AlgebraVector{kernel.col(c)}, xi).coeffs.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orbit CSV and witness JSON formats") {
    CatalogEntry so3 = catalog("so3");
    DualVector xi0{(Vec(3) << 0.0, 0.0, 1.0).finished()};
    auto points = orbit_sample(*so3.rep, xi0, 3, 1);
    std::string csv = orbit_csv(points);
    CHECK(csv.rfind("xi_0,xi_1,xi_2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    std::string wj = witnesses_json(points);
    CHECK(wj.front() == '[');

    // determinism: same seed, same bytes
    CHECK(orbit_csv(orbit_sample(*so3.rep, xi0, 3, 1)) == csv);
}
