#pragma once

#include "coadjoint/lie_poisson.hpp"

namespace coadjoint {

struct Trajectory {
    std::vector<double> times;
    std::vector<DualPoint> states;
};

enum class Method { rk4, euler };

/// Thrown when the state stops being finite; carries what was integrated so far.
struct DivergenceError : std::runtime_error {
    Trajectory partial;
    double last_valid_time = 0.0;

    DivergenceError(std::string msg, Trajectory traj, double t)
        : std::runtime_error(std::move(msg)), partial(std::move(traj)), last_valid_time(t) {}
};

/// Fixed-step integration of the Hamiltonian equations on A*.
Trajectory integrate(const AlgebroidSpec& spec, const Observable& H, const DualPoint& z0,
                     double t_end, double dt, Method method = Method::rk4);

struct DriftStat {
    std::string name;
    double initial = 0.0;
    double max_abs_drift = 0.0;
    double rel_drift = 0.0;
};

struct ConservationReport {
    std::vector<DriftStat> entries;

    const DriftStat& operator[](const std::string& name) const;
    std::string to_json() const;
};

ConservationReport conservation_report(const Trajectory& traj,
                                       const std::vector<Observable>& observables);

/// CSV with header t,x_0..x_{n-1},y_0..y_{k-1}.
std::string trajectory_csv(int base_dim, int rank, const Trajectory& traj);

enum class IntegralMode { pointwise, trajectory };

struct IntegralCheckParams {
    int samples = 50;
    std::uint32_t seed = 1;
    double box = 1.0;  // pointwise sampling box half-width
    DualPoint z0;      // trajectory mode start
    double dt = 1e-3;
    double t_end = 10.0;
    Method method = Method::rk4;
};

struct IntegralCheckResult {
    IntegralMode mode = IntegralMode::pointwise;
    double defect = 0.0;  // max |{F,H}| (pointwise) or drift of F (trajectory)
};

IntegralCheckResult first_integral_check(const AlgebroidSpec& spec, const Observable& H,
                                         const Observable& F, IntegralMode mode,
                                         const IntegralCheckParams& params);

struct InvolutionReport {
    std::vector<std::string> names;
    Mat defect;                    // (i, j) = max over samples of |{F_i, F_j}|
    int in_involution_count = 0;   // functions commuting with every other below tol
    int independent_count = 0;     // gradient rank of the commuting subfamily
    double tol = 0.0;

    std::string to_json() const;
};

/// Pairwise bracket defects of a family of observables, plus the numeric shadow
/// of integrability: how many of them pairwise commute below tol and how many
/// of those have independent gradients at sampled points.
InvolutionReport involution_check(const AlgebroidSpec& spec,
                                  const std::vector<Observable>& fns, int samples,
                                  std::uint32_t seed, double tol = 1e-8);

struct CorrespondenceReport {
    double product_defect = 0.0;  // max |{F, H}| on M x g*
    double fiber_defect = 0.0;    // max |{f, h}_KK| on g*
    bool product_pass = false;
    bool fiber_pass = false;
    double tol = 0.0;

    bool verdicts_agree() const { return product_pass == fiber_pass; }
    double route_gap() const { return std::abs(product_defect - fiber_defect); }
};

/// Both directions of the first-integral correspondence, evaluated at matched
/// sample points: F = (p, f) is a first integral of H = (p, h) on the product
/// space at tolerance tol iff f passes the fiberwise check.
CorrespondenceReport correspondence_check(const StructureConstants& L,
                                          const DualVector& xi0, int base_dim,
                                          const Observable& f, const Observable& h,
                                          double tol, int samples, std::uint32_t seed);

struct PresetOptions {
    Vec inertia;   // defaults to (1, 2, 3)
    Vec coupling;  // e3_kirchhoff only; defaults to (0.3, 0.2, 0.1)
};

struct PresetSystem {
    std::string name;
    AlgebroidSpec spec;
    Observable hamiltonian;
    DualPoint z0;
    std::vector<Observable> integrals;  // known first integrals, hamiltonian first
};

/// euler_top: fiberwise so(3), H = 1/2 sum y_a^2 / I_a, integrals {H, |y|^2}.
/// e3_kirchhoff: fiberwise e(3) with fiber split (y, p), H = 1/2 sum y_a^2 / I_a
/// + sum c_a p_a, integrals {H, p.p, y.p}.
PresetSystem preset(const std::string& name, const PresetOptions& opts = {});

}  // namespace coadjoint
