#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/field.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

ProbabilityField distribution(const SpinorField& state);

/// beta_k = Re(a_k conj(b_k)); zero outside the stored range.
double interference_term(const SpinorField& state, std::int64_t k);

/// Second central moment. Throws ValidationError if |sum F - 1| > 1e-9.
/// Moments are taken in the local index k - k_min, so the result does not
/// depend on where the field sits on the lattice.
double variance(const ProbabilityField& field);
double mean_momentum(const ProbabilityField& field);

/// 1 / sum F_k^2.
double participation_number(const ProbabilityField& field);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    /// Localization length (-1/slope) or growth exponent (slope), per fit kind.
    double derived = 0.0;
    /// Exponential fits only: false when the log-profile does not decay.
    bool localized = true;
};

/// Ordinary least squares y = slope*x + intercept. Needs >= 3 points.
FitResult linear_fit(std::span<const double> x, std::span<const double> y);

/// Which sites enter the exponential fit.
struct FitWindow {
    double floor = 1e-14;         ///< drop F_k below this
    double trim_fraction = 0.05;  ///< drop this share of the outermost occupied sites
};

/// Fits ln F_k against |k - mean| over the window; derived = -1/slope, so
/// F_k ~ exp(-|k - mean| / l). The field need not be normalized.
FitResult localization_length_fit(const ProbabilityField& field, const FitWindow& window = {});

/// Fits ln variance against ln t for t_min <= t <= t_max; derived = slope.
FitResult growth_exponent_fit(const ObservableSeries& series, std::int64_t t_min, std::int64_t t_max);

/// Least-squares c in variance ~ c t^2 over the window.
double quadratic_coefficient(const ObservableSeries& series, std::int64_t t_min, std::int64_t t_max);

struct Peak {
    std::int64_t k = 0;
    double probability = 0.0;
};

struct PeakReport {
    std::int64_t q = 0;
    std::vector<Peak> peaks;   ///< sorted by probability, highest first
    std::size_t checked = 0;   ///< ceil(participation / q), capped at peaks.size()
    bool aligned = false;      ///< every checked peak within one site of a multiple of q
};

/// Local maxima over same-parity neighbours (k +- 2) holding at least 1e-6 of
/// the global maximum, and whether the strongest ones sit on multiples of q.
PeakReport resonance_peaks(const ProbabilityField& field, std::int64_t q);

}  // namespace qwalk
