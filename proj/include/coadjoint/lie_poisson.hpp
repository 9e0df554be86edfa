#pragma once

#include "coadjoint/algebroid.hpp"

#include <array>
#include <functional>
#include <string>

namespace coadjoint {

/// Point (x^i, y_a) of the dual bundle A*, the phase space of the dynamics.
struct DualPoint {
    Vec x;
    Vec y;
};

/// Smooth observable on A*. The gradient callback is optional; central
/// differences with step fd_step are used when it is absent.
struct Observable {
    std::string name;
    std::function<double(const DualPoint&)> eval;
    std::function<void(const DualPoint&, Vec& grad_x, Vec& grad_y)> grad;
    double fd_step = 1e-6;
};

/// Analytic gradient when available, otherwise central differences.
void observable_gradient(const Observable& F, const DualPoint& at, Vec& grad_x,
                         Vec& grad_y);

/// Max |analytic - finite difference| over 10 seeded points in [-1,1]^{n+k}.
double validate_gradient(const Observable& F, int n, int k, std::uint32_t seed);

struct Monomial {
    double coeff = 0.0;
    std::vector<int> x_pow;  // length n
    std::vector<int> y_pow;  // length k
};

/// Polynomial observable with an analytic gradient.
Observable polynomial_observable(std::string name, int n, int k,
                                 std::vector<Monomial> terms);

/// Coordinate function z_index: x_i for index < n, y_{index-n} otherwise.
Observable coordinate_observable(int n, int k, int index);

/// Linear Poisson bivector at a point, ordered (x-block, y-block):
/// Pi[x^i, x^j] = 0, Pi[x^i, y_a] = rho^i_a(x), Pi[y_a, y_b] = -C^g_{ab}(x) y_g.
Mat bivector(const AlgebroidSpec& spec, const DualPoint& at);

/// grad F . Pi . grad G at the point.
double poisson_bracket(const AlgebroidSpec& spec, const Observable& F,
                       const Observable& G, const DualPoint& at);

struct PhaseVelocity {
    Vec dx;
    Vec dy;
};

/// Hamiltonian vector field in coordinates:
///   dx^i = dH/dy_a rho^i_a,
///   dy_a = -( dH/dx^i rho^i_a + dH/dy_b C^g_{ab} y_g ).
/// Cross-checked against Pi * grad H on every call.
PhaseVelocity hamiltonian_vector_field(const AlgebroidSpec& spec, const Observable& H,
                                       const DualPoint& at);

/// Max |{{F,G},H} + {{G,H},F} + {{H,F},G}| over seeded points, outer brackets
/// by nested central differences at the given step.
double jacobi_check(const AlgebroidSpec& spec,
                    const std::vector<std::array<Observable, 3>>& triples,
                    int samples, std::uint32_t seed, double outer_step = 1e-4);

/// Max over seeded points of the largest |{F, z_a}| over all coordinates.
double casimir_check(const AlgebroidSpec& spec, const Observable& F, int samples,
                     std::uint32_t seed);

/// Kirillov-Kostant bracket at xi: the fiberwise (zero-anchor) case, equal to
/// -<xi, [grad f, grad g]> under this module's sign convention.
double kk_bracket(const StructureConstants& L, const Observable& f,
                  const Observable& g, const DualVector& xi);

/// Product phase space M x g* with the fiberwise structure of L and zero
/// anchor; the dual of the coadjoint algebroid in coordinates.
AlgebroidSpec fiberwise_product_spec(int base_dim, const StructureConstants& L);

/// Lift of a fiber observable f to F = (p, f) on the product phase space.
Observable lift_fiber_observable(int base_dim, const Observable& f);

/// Max over sampled (x, y) of |{F, H}_product - {f, h}_KK| for F = (p, f),
/// H = (p, h).
double product_bracket_check(const StructureConstants& L, const DualVector& xi0,
                             int base_dim, const Observable& f, const Observable& h,
                             int samples, std::uint32_t seed);

}  // namespace coadjoint
