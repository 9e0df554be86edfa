#pragma once

#include "coadjoint/groupoid.hpp"

namespace coadjoint {

/// Two-form on a chart: eval(point, u, v) antisymmetric and bilinear in (u, v).
struct TwoFormField {
    std::function<double(const Vec& point, const Vec& u, const Vec& v)> eval;
};

/// Orbit form at xi on tangents ad*_X xi, ad*_Y xi: <xi, [X, Y]>.
double kks_form(const StructureConstants& L, const DualVector& xi,
                const AlgebraVector& X, const AlgebraVector& Y);

struct NondegeneracyReport {
    bool ok = false;
    int gram_rank = 0;
    int orbit_dim = 0;
};

/// Rank of the Gram matrix G(a,b) = <xi, [e_a, e_b]> against the orbit
/// dimension, both under the same relative threshold.
NondegeneracyReport orbit_nondegeneracy(const StructureConstants& L,
                                        const DualVector& xi, double tol = 1e-10);

/// Tangent vector to a coadjoint orbit carrying the algebra representative
/// that produced it.
struct OrbitTangent {
    DualVector value;    // ad*_rep xi
    AlgebraVector rep;
};

OrbitTangent orbit_tangent(const StructureConstants& L, const DualVector& xi,
                           const AlgebraVector& X);

/// Two-form on algebra representatives, possibly depending on the orbit point.
using AlgebraTwoForm =
    std::function<double(const DualVector& xi, const AlgebraVector&, const AlgebraVector&)>;

/// Orbit two-form defined through representatives: eval(xi, u, v) = omega(xi,
/// u.rep, v.rep). Whether the value is independent of the choice of
/// representative is measured, not assumed: audit_spread perturbs the
/// representatives inside the stabilizer kernel and reports the spread.
struct PullbackForm {
    AlgebraTwoForm omega;
    StructureConstants constants;
    DualVector origin;

    double eval(const DualVector& xi_at, const OrbitTangent& u, const OrbitTangent& v) const;
    double audit_spread(const DualVector& xi_at, int samples, std::uint32_t seed) const;
};

PullbackForm pullback_form(AlgebraTwoForm omega, const StructureConstants& L,
                           const DualVector& xi0);

/// Cotangent groupoid of the matrix group in right trivialization:
/// elements (g, mu), target (g, mu) = mu, source (g, mu) = Ad*_{g^{-1}} mu,
/// m((g, mu), (h, nu)) = (gh, mu) when nu = Ad*_{g^{-1}} mu, with the canonical
/// symplectic form
///   omega((dg, dmu), (dg', dmu')) = <dmu', r> - <dmu, r'> - <mu, [r, r']>
/// where r = coordinates of dg g^{-1} in the algebra basis.
struct CotangentGroupoid {
    GroupoidChart chart;
    TwoFormField omega;
};

CotangentGroupoid cotangent_groupoid(const MatrixRep& rep, const StructureConstants& L);

/// Max over seeded composable pairs and matched tangent pairs of
/// |omega_{m(g,h)}(Tm(v1,w1), Tm(v2,w2)) - omega_g(v1,v2) - omega_h(w1,w2)|,
/// with Tm by central differences at step h. Tangent matching T alpha(v) =
/// T beta(w) is enforced by overwriting the target block of w.
double multiplicativity_check(const GroupoidChart& G, const TwoFormField& omega,
                              int samples, std::uint32_t seed, double h = 1e-5);

struct CoadjointMultReport {
    double mult_defect = 0.0;
    double audit_spread = 0.0;
    int samples = 0;
    std::uint32_t seed = 0;
    double h = 0.0;

    std::string to_json() const;
};

/// Builds the orbit form on the coadjoint groupoid of the trivial groupoid by
/// pulling the group-restricted cotangent form through representatives, runs
/// the multiplicativity check on it, and reports the numbers together with the
/// representative-independence audit. Reports only; asserts nothing.
CoadjointMultReport coadjoint_multiplicativity_audit(const StructureConstants& L,
                                                     const MatrixRep& rep,
                                                     const DualVector& xi0, int base_dim,
                                                     int samples, std::uint32_t seed,
                                                     double h = 1e-5);

}  // namespace coadjoint
