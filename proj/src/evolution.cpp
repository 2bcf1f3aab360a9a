#include "qwalk/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/observables.hpp"

namespace qwalk {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kNormDriftLimit = 1e-9;

void check_leak(double leak, double tolerance, std::int64_t step) {
    if (leak > tolerance) {
        throw LatticeOverflowError(step, leak);
    }
}

template <typename Field>
double edge_sum(const Field& f, auto&& prob_at_index) {
    const std::size_t n = f.size();
    if (n == 0) return 0.0;
    if (n <= 4) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += prob_at_index(i);
        return s;
    }
    return prob_at_index(0) + prob_at_index(1) + prob_at_index(n - 2) + prob_at_index(n - 1);
}

void validate_record(const std::vector<std::string>& names) {
    const auto known = all_observables();
    for (const auto& n : names) {
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            throw ConfigurationError("unknown observable '" + n + "'");
        }
    }
}

ObservableSeries empty_series(const std::vector<std::string>& names) {
    ObservableSeries s;
    s.names = names;
    s.columns.resize(names.size());
    return s;
}

void record_row(ObservableSeries& series, std::int64_t t, const ProbabilityField& field) {
    series.times.push_back(t);
    for (std::size_t c = 0; c < series.names.size(); ++c) {
        const auto& name = series.names[c];
        double v = 0.0;
        if (name == kVariance) {
            v = variance(field);
        } else if (name == kMean) {
            v = mean_momentum(field);
        } else if (name == kParticipation) {
            v = participation_number(field);
        } else {
            v = boundary_probability(field);
        }
        series.columns[c].push_back(v);
    }
}

void validate_run(const WalkParams& params, const EvolveOptions& options) {
    if (params.steps < 1) {
        throw ValidationError("steps must be at least 1");
    }
    if (options.stride < 1) {
        throw ConfigurationError("stride must be at least 1");
    }
    validate_record(options.record);
}

bool should_record(std::int64_t t, std::int64_t steps, std::int64_t stride) {
    return t % stride == 0 || t == steps;
}

}  // namespace

double boundary_probability(const SpinorField& state) {
    return edge_sum(state, [&](std::size_t i) { return std::norm(state.a[i]) + std::norm(state.b[i]); });
}

double boundary_probability(const ProbabilityField& field) {
    return edge_sum(field, [&](std::size_t i) { return field.F[i]; });
}

SpinorField coin_step(SpinorField state) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Complex a = state.a[i];
        const Complex b = state.b[i];
        state.a[i] = (a + b) * kInvSqrt2;
        state.b[i] = (a - b) * kInvSqrt2;
    }
    return state;
}

SpinorField shift_step(SpinorField state, double tolerance) {
    check_leak(boundary_probability(state), tolerance, state.t + 1);
    const std::size_t n = state.size();
    if (n == 0) return state;
    std::rotate(state.a.begin(), state.a.begin() + 1, state.a.end());
    state.a[n - 1] = Complex{};
    std::rotate(state.b.rbegin(), state.b.rbegin() + 1, state.b.rend());
    state.b[0] = Complex{};
    state.t += 1;
    return state;
}

SpinorField phase_step(SpinorField state, const Omega& omega) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Complex p = drift_phase(omega, state.k_min + static_cast<std::int64_t>(i));
        state.a[i] *= p;
        state.b[i] *= p;
    }
    return state;
}

Propagator::Propagator(const WalkParams& params)
    : params_(params),
      phases_(params.omega, -params.half_width, static_cast<std::size_t>(2 * params.half_width + 1)) {
    if (params.half_width <= 0) {
        throw ConfigurationError("half_width must be positive");
    }
}

void Propagator::advance(SpinorField& state) {
    const std::size_t n = state.size();
    if (state.k_min != phases_.k_min() || n != phases_.size()) {
        throw ConfigurationError("state lattice does not match propagator lattice");
    }
    check_leak(boundary_probability(state), params_.boundary_tolerance, state.t + 1);

    next_a_.assign(n, Complex{});
    next_b_.assign(n, Complex{});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        next_a_[i] = ((state.a[i + 1] + state.b[i + 1]) * kInvSqrt2) * phases_[i];
    }
    for (std::size_t i = 1; i < n; ++i) {
        next_b_[i] = ((state.a[i - 1] - state.b[i - 1]) * kInvSqrt2) * phases_[i];
    }
    state.a.swap(next_a_);
    state.b.swap(next_b_);
    state.t += 1;
}

SpinorField step(SpinorField state, const WalkParams& params) {
    Propagator p(params);
    p.advance(state);
    return state;
}

ProbabilityField delta_field(const WalkParams& params, std::int64_t site) {
    if (params.half_width <= 0) {
        throw ConfigurationError("half_width must be positive");
    }
    if (site < -params.half_width || site > params.half_width) {
        throw ConfigurationError("initial site " + std::to_string(site) + " outside lattice");
    }
    ProbabilityField f;
    f.k_min = -params.half_width;
    f.F.assign(static_cast<std::size_t>(2 * params.half_width + 1), 0.0);
    f.F[static_cast<std::size_t>(site - f.k_min)] = 1.0;
    return f;
}

void markov_advance(ProbabilityField& field, double tolerance, std::vector<double>& scratch) {
    check_leak(boundary_probability(field), tolerance, field.t + 1);
    const std::size_t n = field.size();
    scratch.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double up = i + 1 < n ? field.F[i + 1] : 0.0;
        const double down = i > 0 ? field.F[i - 1] : 0.0;
        scratch[i] = 0.5 * (up + down);
    }
    field.F.swap(scratch);
    field.t += 1;
}

ProbabilityField markov_step(ProbabilityField field, double tolerance) {
    std::vector<double> scratch;
    markov_advance(field, tolerance, scratch);
    return field;
}

EvolveResult evolve(SpinorField state, const WalkParams& params, const EvolveOptions& options) {
    validate_run(params, options);
    Propagator prop(params);
    ObservableSeries series = empty_series(options.record);
    const std::int64_t t0 = state.t;
    for (std::int64_t n = 1; n <= params.steps; ++n) {
        prop.advance(state);
        const double drift = std::abs(state.norm_squared() - 1.0);
        if (!(drift <= kNormDriftLimit)) {
            throw ValidationError("norm drift " + std::to_string(drift) + " at step " +
                                  std::to_string(state.t));
        }
        if (should_record(n, params.steps, options.stride)) {
            record_row(series, t0 + n, distribution(state));
        }
    }
    return {std::move(series), std::move(state)};
}

MarkovResult evolve_markov(ProbabilityField field, const WalkParams& params, const EvolveOptions& options) {
    validate_run(params, options);
    ObservableSeries series = empty_series(options.record);
    std::vector<double> scratch;
    const std::int64_t t0 = field.t;
    for (std::int64_t n = 1; n <= params.steps; ++n) {
        markov_advance(field, params.boundary_tolerance, scratch);
        if (should_record(n, params.steps, options.stride)) {
            record_row(series, t0 + n, field);
        }
    }
    return {std::move(series), std::move(field)};
}

}  // namespace qwalk
