#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qwalk/phase.hpp"

namespace qwalk {

using Complex = std::complex<double>;

/// Parameters shared by a whole run. Time is counted in steps (tau = 1).
struct WalkParams {
    Omega omega;
    std::int64_t half_width = 0;  ///< lattice spans k in [-K, K]
    std::int64_t steps = 0;
    double boundary_tolerance = 1e-12;
};

/// Single-site initial state (c_L, c_R) |k0>.
struct InitialCondition {
    std::int64_t site = 0;
    Complex left{1.0, 0.0};
    Complex right{0.0, 0.0};

    /// (1/sqrt2)(1, i)|0>, the default symmetric start.
    static InitialCondition symmetric();
};

/// Two-component amplitudes on k_min .. k_min + size - 1.
///
/// `a` carries left chirality, `b` right chirality. Mutated only by the
/// evolution routines.
struct SpinorField {
    std::int64_t k_min = 0;
    std::vector<Complex> a;
    std::vector<Complex> b;
    std::int64_t t = 0;

    std::size_t size() const { return a.size(); }
    std::int64_t k_max() const { return k_min + static_cast<std::int64_t>(a.size()) - 1; }
    bool contains(std::int64_t k) const { return k >= k_min && k <= k_max(); }
    std::size_t index(std::int64_t k) const { return static_cast<std::size_t>(k - k_min); }

    /// Sum over sites of |a_k|^2 + |b_k|^2.
    double norm_squared() const;
};

/// Delta state at init.site on a lattice of half-width params.half_width.
/// Throws ConfigurationError for an out-of-lattice site and ValidationError
/// when |c_L|^2 + |c_R|^2 differs from 1 by more than 1e-9.
SpinorField new_state(const WalkParams& params, const InitialCondition& init);

/// F_k = |a_k|^2 + |b_k|^2, zero outside the stored range.
double probability_at(const SpinorField& state, std::int64_t k);

}  // namespace qwalk
