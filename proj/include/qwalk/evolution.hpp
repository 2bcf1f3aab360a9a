#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/field.hpp"
#include "qwalk/phase.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

enum class StepMode { Coherent, Markov };

// Elementary sub-steps. step() == phase_step(shift_step(coin_step(s))).

/// Hadamard coin on every site: (a, b) -> ((a + b)/sqrt2, (a - b)/sqrt2).
SpinorField coin_step(SpinorField state);

/// a_k <- a_{k+1}, b_k <- b_{k-1}. Throws LatticeOverflowError when the
/// probability on the two outermost sites at either end exceeds `tolerance`.
SpinorField shift_step(SpinorField state, double tolerance);

/// (a_k, b_k) <- exp(-i 2 pi Omega k^2) (a_k, b_k).
SpinorField phase_step(SpinorField state, const Omega& omega);

/// Probability held by sites |k| in {K-1, K} (the two outermost at each end).
double boundary_probability(const SpinorField& state);
double boundary_probability(const ProbabilityField& field);

/// One-step map with a cached drift-phase table for the lattice of `params`.
class Propagator {
public:
    explicit Propagator(const WalkParams& params);

    /// Advances `state` by one step in place.
    void advance(SpinorField& state);

    const PhaseTable& phases() const { return phases_; }
    const WalkParams& params() const { return params_; }

private:
    WalkParams params_;
    PhaseTable phases_;
    std::vector<Complex> next_a_;
    std::vector<Complex> next_b_;
};

/// Full map: a_k <- (a_{k+1} + b_{k+1}) e^{-i2piOmega k^2}/sqrt2,
///           b_k <- (a_{k-1} - b_{k-1}) e^{-i2piOmega k^2}/sqrt2.
SpinorField step(SpinorField state, const WalkParams& params);

/// Delta distribution at `site` on the lattice of `params`.
ProbabilityField delta_field(const WalkParams& params, std::int64_t site);

/// Interference-free dynamics F_k <- (F_{k+1} + F_{k-1})/2.
ProbabilityField markov_step(ProbabilityField field, double tolerance);
void markov_advance(ProbabilityField& field, double tolerance, std::vector<double>& scratch);

struct EvolveOptions {
    std::vector<std::string> record = all_observables();
    std::int64_t stride = 1;  ///< record every stride steps; the final step is always recorded
};

struct EvolveResult {
    ObservableSeries series;
    SpinorField final_state;
};

struct MarkovResult {
    ObservableSeries series;
    ProbabilityField final_field;
};

/// Applies step() params.steps times, recording observables. Norm drift
/// beyond 1e-9 is a ValidationError; unknown observable names are a
/// ConfigurationError.
EvolveResult evolve(SpinorField state, const WalkParams& params, const EvolveOptions& options = {});

MarkovResult evolve_markov(ProbabilityField field, const WalkParams& params,
                           const EvolveOptions& options = {});

}  // namespace qwalk
