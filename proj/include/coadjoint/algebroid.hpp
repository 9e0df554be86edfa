#pragma once

#include "coadjoint/matrix_group.hpp"

#include <functional>

namespace coadjoint {

enum class AlgebroidKind { trivial, coadjoint, custom };

/// Lie algebroid data on a chart: anchor rho and structure functions C over a
/// base box in R^n. The anchor matrix is rank x base_dim with row a, column i
/// holding rho^i_a(x). Built-in kinds have constant structure functions; custom
/// specs may supply x-dependent callables.
struct AlgebroidSpec {
    int base_dim = 0;
    int rank = 0;
    AlgebroidKind kind = AlgebroidKind::custom;

    Mat const_anchor;                                    // used when anchor_fn unset
    std::optional<StructureConstants> const_structure;   // used when structure_fn unset
    std::function<Mat(const Vec&)> anchor_fn;
    std::function<StructureConstants(const Vec&)> structure_fn;

    bool constant() const { return !anchor_fn && !structure_fn; }

    Mat anchor(const Vec& x) const {
        return anchor_fn ? anchor_fn(x) : const_anchor;
    }
    StructureConstants structure(const Vec& x) const {
        return structure_fn ? structure_fn(x) : *const_structure;
    }
};

/// Section of the algebroid: x -> coefficients over the basis of sections.
struct Section {
    std::function<AlgebraVector(const Vec&)> eval;
};

/// TM + (M x g): rank = base_dim + k, anchor projects onto the TM block,
/// bracket is the chart bracket on TM plus the fiberwise algebra bracket.
AlgebroidSpec trivial_algebroid(int base_dim, const StructureConstants& L);

/// Generators e'_a = ad*_{e_a} xi0 of the coadjoint algebroid and their rank.
struct CoadjointGenerators {
    Mat generators;  // column a = e'_a
    int rank = 0;
};
CoadjointGenerators coadjoint_generators(const StructureConstants& L,
                                         const DualVector& xi0);

/// M x T_xi0 O(xi0) as a bundle of Lie algebras: rank k, structure functions
/// equal to those of L, zero anchor. Throws DegenerateInputError when every
/// generator vanishes (zero orbit).
AlgebroidSpec coadjoint_algebroid(int base_dim, const StructureConstants& L,
                                  const DualVector& xi0);

/// [X,Y]^g(x) = C^g_{ab} X^a Y^b + (rho(X) Y^g)(x) - (rho(Y) X^g)(x), with the
/// directional derivatives taken by central differences along anchor images.
AlgebraVector section_bracket(const AlgebroidSpec& spec, const Section& X,
                              const Section& Y, const Vec& x, double h = 1e-5);

/// Max over sampled x of || [X, fY] - f [X,Y] - (rho(X) f) Y ||_inf.
double leibniz_check(const AlgebroidSpec& spec, const Section& X, const Section& Y,
                     const std::function<double(const Vec&)>& f, int samples,
                     std::uint32_t seed, double h = 1e-5);

struct StructureEqualityReport {
    bool certified = false;  // generators form a basis (rank == k) and defect passed
    int generator_rank = 0;
    double max_defect = 0.0;
};

/// Compares the bracket of coadjoint generators computed two ways: contraction
/// with the structure constants versus ad* of the algebra bracket. Certifies
/// the structure-function equality only in the regular case rank == k;
/// otherwise reports the generator rank and the (always-computed) defect.
StructureEqualityReport structure_equality_check(const StructureConstants& L,
                                                 const DualVector& xi0);

/// Compares the pushforward of the right-invariant field of X through
/// g -> Ad*_g xi0 (finite difference) against ad*_X applied at the orbit point.
double invariant_field_check(const StructureConstants& L, const MatrixRep& rep,
                             const DualVector& xi0, const AlgebraVector& X,
                             int samples, std::uint32_t seed, double h = 1e-5);

/// JSON round trip for constant-structure specs:
/// {"n":..., "k":..., "anchor": [[...], ...], "c": [[a,b,g,v], ...]}.
std::string algebroid_to_json(const AlgebroidSpec& spec);
AlgebroidSpec algebroid_from_json(const std::string& text);

}  // namespace coadjoint
