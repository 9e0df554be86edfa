#pragma once

#include "coadjoint/lie_algebra.hpp"

#include <vector>

namespace coadjoint {

struct GroupElement {
    Mat matrix;
};

/// A point on a coadjoint orbit together with the group element that produced
/// it, so that quotient-level constructions stay computable and auditable.
struct OrbitPoint {
    DualVector xi;         // Ad*_witness origin
    GroupElement witness;
    DualVector origin;
};

/// Matrix exponential by scaling-and-squaring with a degree-12 Taylor kernel
/// (squaring threshold ||A||_1 <= 0.5).
GroupElement exp_matrix(const Mat& A);

/// mat(X) = sum_a X^a basis[a].
Mat rep_matrix(const MatrixRep& rep, const AlgebraVector& X);

/// Least-squares expansion of M in the representation basis. With strict set,
/// throws RepClosureError when the residual exceeds tol * max(1, ||M||_inf);
/// otherwise returns the plain projection.
AlgebraVector expand_in_basis(const MatrixRep& rep, const Mat& M, double tol = 1e-9,
                              bool strict = true);

/// Max norm of mat([e_a, e_b]) - sum_g c(a,b,g) basis[g] over all pairs.
double rep_closure_defect(const MatrixRep& rep, const StructureConstants& L);

/// True when the basis matrices are linearly independent.
bool rep_basis_independent(const MatrixRep& rep, double rel_tol = 1e-10);

/// Ad_g X: coordinates of g mat(X) g^{-1} in the basis.
AlgebraVector big_ad(const MatrixRep& rep, const GroupElement& g, const AlgebraVector& X);

/// Ad*_g xi, defined by <Ad*_g xi, X> = <xi, Ad_{g^{-1}} X>.
DualVector big_coad(const MatrixRep& rep, const GroupElement& g, const DualVector& xi);

/// n points Ad*_{exp(mat(X_j))} xi0 with X_j coefficients uniform on [-2, 2].
std::vector<OrbitPoint> orbit_sample(const MatrixRep& rep, const DualVector& xi0,
                                     int n, std::uint32_t seed);

/// Column a is ad*_{e_a} xi; its rank is the orbit dimension.
Mat coad_generator_matrix(const StructureConstants& L, const DualVector& xi);

/// Rank of X -> ad*_X xi with singular values below rel_tol * largest dropped.
int orbit_dimension(const StructureConstants& L, const DualVector& xi,
                    double rel_tol = 1e-10);

/// Orthonormal basis of { X : ad*_X xi = 0 } (the stabilizer subalgebra),
/// returned as matrix columns; empty when the stabilizer is trivial.
Mat stabilizer_kernel(const StructureConstants& L, const DualVector& xi,
                      double rel_tol = 1e-10);

bool stabilizer_check(const MatrixRep& rep, const GroupElement& g,
                      const DualVector& xi, double tol);

/// CSV with header xi_0..xi_{k-1}, one row per orbit point.
std::string orbit_csv(const std::vector<OrbitPoint>& points);

/// JSON array of row-major witness matrices.
std::string witnesses_json(const std::vector<OrbitPoint>& points);

}  // namespace coadjoint
