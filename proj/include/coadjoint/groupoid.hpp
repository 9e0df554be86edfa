#pragma once

#include "coadjoint/matrix_group.hpp"

#include <functional>
#include <utility>

namespace coadjoint {

/// Coordinate model of a Lie groupoid: numeric structure maps over flat element
/// and base charts, plus seeded samplers for elements and tangents.
///
/// Convention for the built-in charts: an element of the trivial groupoid
/// M x Grp x M is stored as (p, a, q) with source alpha(p,a,q) = q and target
/// beta(p,a,q) = p, so m(g, h) needs alpha(g) = beta(h).
struct GroupoidChart {
    enum class Kind { trivial, coadjoint, cotangent, custom };

    Kind kind = Kind::custom;
    int elem_dim = 0;
    int base_dim = 0;
    double tol_base = 1e-9;     // composability tolerance on ||alpha(g) - beta(h)||_inf
    double tol_display = 1e-9;  // element equality tolerance in display coordinates

    std::function<Vec(const Vec&)> source;
    std::function<Vec(const Vec&)> target;
    std::function<Vec(const Vec&)> unit;      // base -> elem
    std::function<Vec(const Vec&)> inverse;
    std::function<Vec(const Vec&, const Vec&)> multiply;

    /// Coordinates used for element equality in reports. Identity when unset;
    /// the coadjoint chart displays (p, Ad*_witness xi0, q).
    std::function<Vec(const Vec&)> display;

    std::function<Vec(std::mt19937&)> sample_base;
    /// Element with target(elem) == t.
    std::function<Vec(const Vec&, std::mt19937&)> sample_arrow_with_target;
    /// Element with source == target == p; unset for charts without a
    /// parameterizable isotropy.
    std::function<Vec(const Vec&, std::mt19937&)> sample_isotropy;
    /// Random vector tangent to the element manifold at the given element.
    std::function<Vec(const Vec&, std::mt19937&)> sample_tangent;

    // Coordinate block computed by target(), used to enforce the tangent
    // matching constraint T alpha(v) = T beta(w) by overwriting that block.
    int target_block_offset = 0;
    int target_block_size = 0;

    Vec show(const Vec& e) const { return display ? display(e) : e; }
    bool composable(const Vec& g, const Vec& h) const {
        return inf_gap(source(g), target(h)) <= tol_base;
    }
    Vec sample_element(std::mt19937& rng) const {
        return sample_arrow_with_target(sample_base(rng), rng);
    }
};

GroupoidChart make_trivial_groupoid(int base_dim, const MatrixRep& rep);

/// Chart for the coadjoint groupoid of the trivial groupoid: elements carry the
/// witness triple (p, a, q) and display (p, Ad*_a xi0, q). Composition uses the
/// witness; equality in reports uses the displayed coordinates.
GroupoidChart make_coadjoint_groupoid(int base_dim, const MatrixRep& rep,
                                      const DualVector& xi0);

struct AxiomResidual {
    std::string axiom;
    double max_residual = 0.0;
};

struct AxiomReport {
    std::vector<AxiomResidual> axioms;
    int samples = 0;
    std::uint32_t seed = 0;

    double max_residual() const;
    const AxiomResidual& operator[](const std::string& name) const;
    std::string to_json() const;
};

/// Residuals of the groupoid axioms over seeded samples: source/target
/// compatibility of products, associativity, unit laws, inverse laws.
AxiomReport axioms_check(const GroupoidChart& G, int samples, std::uint32_t seed);

/// n isotropy elements at p; every element is validated to have source and
/// target within 1e-12 of p.
std::vector<Vec> isotropy_sample(const GroupoidChart& G, const Vec& p, int n,
                                 std::uint32_t seed);

/// Central difference (f(at + h v) - f(at - h v)) / (2h).
Vec tangent_map(const std::function<Vec(const Vec&)>& f, const Vec& at, const Vec& v,
                double h);

/// One evaluation of the multiplication-tangent identity on the trivial
/// groupoid: compares the pushforward of (X, Y) through g -> Ad*_g xi0 composed
/// with m against ad*_{Tm(X,Y)} xi evaluated at the product.
double tm_coadjoint_pair_defect(const StructureConstants& L, const MatrixRep& rep,
                                const DualVector& xi0, const GroupoidChart& trivial,
                                const Vec& g, const Vec& h_elem, const Vec& X,
                                const Vec& Y, double h);

/// Max defect of the identity above over seeded composable pairs with matched
/// tangents (T alpha(X) = T beta(Y)).
double tm_coadjoint_check(const StructureConstants& L, const MatrixRep& rep,
                          const DualVector& xi0, int base_dim, int samples,
                          std::uint32_t seed, double h = 1e-5);

struct TranslationMaps {
    std::function<Vec(const Vec&)> left;   // h' -> g' h' on the beta-fiber of alpha(g')
    std::function<Vec(const Vec&)> right;  // h' -> h' g' on the alpha-fiber of beta(g')
};

struct FiberMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Left/right translations by a fixed element; each map validates that its
/// argument lies in the expected fiber and that the image lands in the stated
/// one (residual <= 1e-10).
TranslationMaps translations(const GroupoidChart& G, const Vec& gprime);

struct WitnessAudit {
    /// Display change when the first factor's witness is varied inside the
    /// stabilizer; vanishes exactly when the stabilizer is normal.
    double first_factor_defect = 0.0;
    /// Same for the second factor; vanishes identically.
    double second_factor_defect = 0.0;
};

/// Spot check of witness independence of the displayed product: multiplies
/// pairs whose witnesses are varied by stabilizer elements of xi0 and measures
/// the spread of the displayed xi values.
WitnessAudit coadjoint_witness_audit(const StructureConstants& L, const MatrixRep& rep,
                                     const DualVector& xi0, int samples,
                                     std::uint32_t seed);

}  // namespace coadjoint
