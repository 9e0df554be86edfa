#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coadjoint/dynamics.hpp"

#include <cmath>

using namespace coadjoint;

namespace {

Vec end_state(const Trajectory& t) {
    Vec z(t.states.back().x.size() + t.states.back().y.size());
    z << t.states.back().x, t.states.back().y;
    return z;
}

Observable negated(const Observable& H) {
    Observable out = H;
    out.name = "-" + H.name;
    out.eval = [H](const DualPoint& p) { return -H.eval(p); };
    if (H.grad)
        out.grad = [H](const DualPoint& p, Vec& gx, Vec& gy) {
            H.grad(p, gx, gy);
            gx = -gx;
            gy = -gy;
        };
    return out;
}

}  // namespace

TEST_CASE("integrate: constant Hamiltonian freezes the state") {
    PresetSystem sys = preset("euler_top");
    Observable c;
    c.name = "c";
    c.eval = [](const DualPoint&) { return 3.0; };
    Trajectory traj = integrate(sys.spec, c, sys.z0, 1.0, 1e-2);
    for (const auto& s : traj.states)
        CHECK((s.y - sys.z0.y).cwiseAbs().maxCoeff() < 1e-14);
    // uniform step, strictly increasing times
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        CHECK(traj.times[i] > traj.times[i - 1]);
        CHECK(std::abs((traj.times[i] - traj.times[i - 1]) - 1e-2) < 1e-12);
    }
    CHECK_THROWS_AS(integrate(sys.spec, c, sys.z0, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(integrate(sys.spec, c, sys.z0, 1e-4, 1e-3), InputError);
}

TEST_CASE("Euler top conserves H and the Casimir") {
    PresetSystem sys = preset("euler_top");
    Trajectory traj = integrate(sys.spec, sys.hamiltonian, sys.z0, 10.0, 1e-3);
    ConservationReport rep = conservation_report(traj, sys.integrals);
    CHECK(rep["H"].max_abs_drift <= 1e-8);
    CHECK(rep["casimir_yy"].max_abs_drift <= 1e-8);
}

TEST_CASE("rk4 beats euler on Casimir drift by three orders") {
    PresetSystem sys = preset("euler_top");
    Trajectory rk = integrate(sys.spec, sys.hamiltonian, sys.z0, 10.0, 1e-3, Method::rk4);
    Trajectory eu = integrate(sys.spec, sys.hamiltonian, sys.z0, 10.0, 1e-3, Method::euler);
    const double drift_rk = conservation_report(rk, {sys.integrals[1]}).entries[0].max_abs_drift;
    const double drift_eu = conservation_report(eu, {sys.integrals[1]}).entries[0].max_abs_drift;
    CHECK(drift_eu >= 1e3 * drift_rk);
}

TEST_CASE("divergence raises with the partial trajectory attached") {
    // dx/dt = x^2 from x = 1 blows up at t = 1
    StructureConstants ab = catalog("abelian(1)").constants;
    AlgebroidSpec spec = trivial_algebroid(1, ab);
    Observable H = polynomial_observable("H", 1, 2, {Monomial{1.0, {2}, {1, 0}}});
    DualPoint z0{Vec::Ones(1), (Vec(2) << 1.0, 0.0).finished()};
    try {
        integrate(spec, H, z0, 2.0, 1e-3, Method::euler);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.partial.states.size() > 100);
        CHECK(e.last_valid_time > 0.9);
        CHECK(e.last_valid_time < 1.3);
        CHECK(e.partial.times.back() == e.last_valid_time);
    }
}

TEST_CASE("time reversal returns to the start") {
    PresetSystem sys = preset("euler_top");
    Trajectory fwd = integrate(sys.spec, sys.hamiltonian, sys.z0, 10.0, 1e-3);
    DualPoint zend = fwd.states.back();
    Trajectory back = integrate(sys.spec, negated(sys.hamiltonian), zend, 10.0, 1e-3);
    CHECK((end_state(back) - (Vec(3) << 1.0, 0.1, 0.1).finished()).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("rk4 order: halving dt shrinks the end-state error about 16x") {
    // measured against a dt/10 reference; dt chosen so truncation dominates the
    // accumulated round-off (the error floor sits near 1e-14 for this system)
    PresetSystem sys = preset("euler_top");
    auto err = [&](double dt) {
        Trajectory run = integrate(sys.spec, sys.hamiltonian, sys.z0, 10.0, dt);
        Trajectory ref = integrate(sys.spec, sys.hamiltonian, sys.z0, 10.0, dt / 10.0);
        return (end_state(run) - end_state(ref)).cwiseAbs().maxCoeff();
    };
    const double e1 = err(2e-2);
    const double e2 = err(1e-2);
    CHECK(e1 > 1e-12);
    const double ratio = e1 / e2;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("first_integral_check in both modes") {
    PresetSystem sys = preset("euler_top");
    IntegralCheckParams params;
    params.samples = 50;
    params.seed = 5;
    params.z0 = sys.z0;

    // F = H is always a pointwise integral
    CHECK(first_integral_check(sys.spec, sys.hamiltonian, sys.hamiltonian,
                               IntegralMode::pointwise, params)
              .defect <= 1e-10);

    const Observable& casimir = sys.integrals[1];
    CHECK(first_integral_check(sys.spec, sys.hamiltonian, casimir, IntegralMode::pointwise,
                               params)
              .defect <= 1e-8);
    CHECK(first_integral_check(sys.spec, sys.hamiltonian, casimir, IntegralMode::trajectory,
                               params)
              .defect <= 1e-8);

    Observable y0 = coordinate_observable(0, 3, 0);
    CHECK(first_integral_check(sys.spec, sys.hamiltonian, y0, IntegralMode::pointwise, params)
              .defect > 0.1);
}

TEST_CASE("involution_check") {
    PresetSystem top = preset("euler_top");
    InvolutionReport r1 = involution_check(top.spec, top.integrals, 40, 3, 1e-8);
    for (Eigen::Index i = 0; i < r1.defect.rows(); ++i) CHECK(r1.defect(i, i) <= 1e-12);
    CHECK(r1.defect(0, 1) <= 1e-8);  // {H, |y|^2}
    CHECK(r1.in_involution_count == 2);
    CHECK(r1.independent_count == 2);

    PresetSystem kirch = preset("e3_kirchhoff");
    InvolutionReport r2 = involution_check(kirch.spec, kirch.integrals, 40, 3, 1e-8);
    CHECK(r2.defect(1, 2) <= 1e-8);  // {p.p, y.p}
    CHECK(r2.in_involution_count == 3);
    CHECK(r2.independent_count == 3);

    // a non-commuting family is counted honestly
    std::vector<Observable> fam = {coordinate_observable(0, 3, 0), coordinate_observable(0, 3, 1)};
    InvolutionReport r3 = involution_check(top.spec, fam, 40, 3, 1e-8);
    CHECK(r3.in_involution_count == 0);

    CHECK_THROWS_AS(involution_check(top.spec, {top.hamiltonian}, 10, 1, 1e-8), InputError);
}

TEST_CASE("correspondence between product-space and fiberwise integrals") {
    StructureConstants so3 = catalog("so3").constants;
    DualVector xi{(Vec(3) << 0.0, 0.0, 1.0).finished()};
    PresetSystem top = preset("euler_top");
    const Observable& casimir = top.integrals[1];

    CorrespondenceReport pass =
        correspondence_check(so3, xi, 2, casimir, top.hamiltonian, 1e-8, 50, 9);
    CHECK(pass.product_pass);
    CHECK(pass.fiber_pass);
    CHECK(pass.route_gap() <= 1e-10);

    Observable y0 = coordinate_observable(0, 3, 0);
    CorrespondenceReport fail =
        correspondence_check(so3, xi, 2, y0, top.hamiltonian, 1e-8, 50, 9);
    CHECK_FALSE(fail.product_pass);
    CHECK_FALSE(fail.fiber_pass);
    CHECK(fail.verdicts_agree());
    CHECK(fail.route_gap() <= 1e-10);
    CHECK(fail.product_defect > 0.01);

    StructureConstants ab = catalog("abelian(3)").constants;
    CorrespondenceReport triv = correspondence_check(
        ab, DualVector{(Vec(3) << 1, 0, 0).finished()}, 2, y0, top.hamiltonian, 1e-8, 30, 9);
    CHECK(triv.product_defect == 0.0);
    CHECK(triv.fiber_defect == 0.0);
}

TEST_CASE("presets") {
    PresetSystem top = preset("euler_top");
    REQUIRE(top.integrals.size() == 2);
    CHECK(top.integrals[1].name == "casimir_yy");
    CHECK(casimir_check(top.spec, top.integrals[1], 30, 2) <= 1e-8);
    CHECK(validate_gradient(top.hamiltonian, 0, 3, 4) <= 1e-6);

    PresetSystem kirch = preset("e3_kirchhoff");
    REQUIRE(kirch.integrals.size() == 3);
    CHECK(casimir_check(kirch.spec, kirch.integrals[1], 30, 2) <= 1e-8);
    CHECK(casimir_check(kirch.spec, kirch.integrals[2], 30, 2) <= 1e-8);
    CHECK(validate_gradient(kirch.hamiltonian, 0, 6, 4) <= 1e-6);

    // with zero coupling and zero momentum the y-block reproduces the Euler top
    PresetOptions opts;
    opts.coupling = Vec::Zero(3);
    PresetSystem reduced = preset("e3_kirchhoff", opts);
    DualPoint z0{Vec(0), (Vec(6) << 1.0, 0.1, 0.1, 0.0, 0.0, 0.0).finished()};
    Trajectory six = integrate(reduced.spec, reduced.hamiltonian, z0, 2.0, 1e-3);
    Trajectory three = integrate(top.spec, top.hamiltonian, top.z0, 2.0, 1e-3);
    for (std::size_t s = 0; s < six.states.size(); ++s) {
        CHECK((six.states[s].y.head(3) - three.states[s].y).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(six.states[s].y.tail(3).cwiseAbs().maxCoeff() <= 1e-12);  // p stays frozen
    }

    CHECK_THROWS_AS(preset("nope"), InputError);
}

TEST_CASE("every Casimir is a first integral of arbitrary Hamiltonians") {
    PresetSystem top = preset("euler_top");
    const Observable& casimir = top.integrals[1];
    auto rng = make_rng(33);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    IntegralCheckParams params;
    params.samples = 30;
    params.seed = 21;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Monomial> terms;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                Monomial m;
                m.coeff = dist(rng);
                m.y_pow.assign(3, 0);
                m.y_pow[a] += 1;
                m.y_pow[b] += 1;
                terms.push_back(m);
            }
        Observable H = polynomial_observable("Hrand", 0, 3, terms);
        CHECK(first_integral_check(top.spec, H, casimir, IntegralMode::pointwise, params)
                  .defect <= 1e-8);
    }
}

TEST_CASE("trajectory CSV and conservation JSON shapes") {
    PresetSystem sys = preset("euler_top");
    Trajectory traj = integrate(sys.spec, sys.hamiltonian, sys.z0, 0.01, 1e-3);
    std::string csv = trajectory_csv(0, 3, traj);
    CHECK(csv.rfind("t,y_0,y_1,y_2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);

    std::string csv2 = trajectory_csv(2, 1, Trajectory{{0.0}, {DualPoint{Vec::Zero(2), Vec::Ones(1)}}});
    CHECK(csv2.rfind("t,x_0,x_1,y_0\n", 0) == 0);

    ConservationReport rep = conservation_report(traj, sys.integrals);
    std::string j = rep.to_json();
    CHECK(j.find("\"H\"") != std::string::npos);
    CHECK(j.find("max_abs_drift") != std::string::npos);
}
