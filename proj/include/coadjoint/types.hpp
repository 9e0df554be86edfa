#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace coadjoint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Coefficients of an algebra element X = X^a e_a in a fixed basis {e_a}.
struct AlgebraVector {
    Vec coeffs;

    AlgebraVector() = default;
    explicit AlgebraVector(Vec c) : coeffs(std::move(c)) {}

    Eigen::Index size() const { return coeffs.size(); }
};

/// Coefficients xi_a of a covector in the dual basis.
struct DualVector {
    Vec coeffs;

    DualVector() = default;
    explicit DualVector(Vec c) : coeffs(std::move(c)) {}

    Eigen::Index size() const { return coeffs.size(); }
};

/// Bad arguments: dimension mismatches, unknown names, malformed input files.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix that should lie in the span of a representation basis does not.
struct RepClosureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An orbit or generator family degenerated to zero where a positive-dimensional
/// object was required.
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A seeded sampler could not produce the requested configuration.
struct SamplerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::mt19937 make_rng(std::uint32_t seed) { return std::mt19937{seed}; }

inline Vec uniform_vec(std::mt19937& rng, Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

/// ||a - b||_inf, with the empty vector treated as a perfect match.
inline double inf_gap(const Vec& a, const Vec& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

/// Shortest-round-trip decimal rendering, used by every text emitter so that
/// repeated runs produce byte-identical files.
std::string format_double(double v);

}  // namespace coadjoint
