#pragma once

#include "coadjoint/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coadjoint {

/// Dense structure constants of a finite-dimensional real Lie algebra.
///
/// Index convention: c(a, b, g) is the e_g-coefficient of [e_a, e_b].
/// Antisymmetry c(a,b,g) = -c(b,a,g) is validated at construction; the Jacobi
/// identity is checked separately by jacobi_defect().
class StructureConstants {
public:
    static constexpr double kTol = 1e-12;

    /// All-zero constants (the abelian algebra of the given rank).
    explicit StructureConstants(int rank);

    /// Build from a dense array laid out as c[(a*k + b)*k + g].
    /// Rejects antisymmetry violations above kTol unless antisymmetrize is set,
    /// in which case c is replaced by (c(a,b,g) - c(b,a,g))/2.
    static StructureConstants from_dense(int rank, std::vector<double> c,
                                         bool antisymmetrize = false);

    int rank() const { return rank_; }
    double c(int a, int b, int g) const { return c_[idx(a, b, g)]; }

    /// Writes both c(a,b,g) = v and c(b,a,g) = -v.
    void set_pair(int a, int b, int g, double v);

    const std::vector<double>& dense() const { return c_; }

    double antisymmetry_defect() const;

private:
    std::size_t idx(int a, int b, int g) const {
        return (static_cast<std::size_t>(a) * rank_ + b) * rank_ + g;
    }

    int rank_;
    std::vector<double> c_;
};

/// e_a as an AlgebraVector of the given rank.
AlgebraVector basis_vector(int rank, int a);
DualVector dual_basis_vector(int rank, int a);

/// [X, Y]^g = sum_{a,b} c(a,b,g) X^a Y^b.
AlgebraVector bracket(const StructureConstants& L, const AlgebraVector& X,
                      const AlgebraVector& Y);

/// Matrix of ad_X = [X, .]: M(g, b) = sum_a c(a,b,g) X^a, so M * Y = [X, Y].
Mat ad_operator(const StructureConstants& L, const AlgebraVector& X);

/// Matrix of the coadjoint operator ad*_X defined by <ad*_X xi, Y> = <xi, [Y, X]>.
/// Equals -ad_operator(L, X)^T entrywise.
Mat coad_operator(const StructureConstants& L, const AlgebraVector& X);

DualVector coad_apply(const StructureConstants& L, const AlgebraVector& X,
                      const DualVector& xi);

/// Max absolute Jacobi residual over all index tuples; 0 for a Lie algebra.
double jacobi_defect(const StructureConstants& L);

/// Max over sampled (X, Y) of || ad*_[X,Y] - [ad*_X, ad*_Y] ||_inf, the defect
/// of X -> ad*_X as a Lie-algebra homomorphism. Components of X, Y are i.i.d.
/// uniform on [-1, 1].
double coad_homomorphism_defect(const StructureConstants& L, int samples,
                                std::uint32_t seed);

/// A faithful matrix realization: basis[a] is the image of e_a.
struct MatrixRep {
    Eigen::Index dim = 0;
    std::vector<Mat> basis;

    int rank() const { return static_cast<int>(basis.size()); }
};

struct CatalogEntry {
    std::string name;
    StructureConstants constants;
    std::optional<MatrixRep> rep;
};

/// Standard algebras by name: so3, so4, so31, e3, sl2, heis3, abelian(n).
/// "abelian" requires the rank parameter (or embed it: "abelian(4)").
CatalogEntry catalog(const std::string& name, std::optional<int> param = std::nullopt);

std::vector<std::string> catalog_names();

/// JSON round trip: {"rank": k, "entries": [[a, b, g, value], ...]} listing only
/// a < b entries, sorted lexicographically.
std::string constants_to_json(const StructureConstants& L);
StructureConstants constants_from_json(const std::string& text);

}  // namespace coadjoint
