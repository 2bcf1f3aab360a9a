#include "qwalk/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kPeakProminence = 1e-6;

void require_normalized(const ProbabilityField& field) {
    const double s = field.total();
    if (!(std::abs(s - 1.0) <= kNormTolerance)) {
        throw ValidationError("probability field not normalized: sum = " + std::to_string(s));
    }
}

double local_mean(const ProbabilityField& field) {
    double m = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) m += static_cast<double>(i) * field.F[i];
    return m;
}

std::int64_t distance_to_multiple(std::int64_t k, std::int64_t q) {
    std::int64_t r = k % q;
    if (r < 0) r += q;
    return std::min(r, q - r);
}

}  // namespace

ProbabilityField distribution(const SpinorField& state) {
    ProbabilityField f;
    f.k_min = state.k_min;
    f.t = state.t;
    f.F.resize(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        f.F[i] = std::norm(state.a[i]) + std::norm(state.b[i]);
    }
    return f;
}

double interference_term(const SpinorField& state, std::int64_t k) {
    if (!state.contains(k)) return 0.0;
    const std::size_t i = state.index(k);
    return (state.a[i] * std::conj(state.b[i])).real();
}

double mean_momentum(const ProbabilityField& field) {
    require_normalized(field);
    return static_cast<double>(field.k_min) + local_mean(field);
}

double variance(const ProbabilityField& field) {
    require_normalized(field);
    const double m = local_mean(field);
    double v = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double d = static_cast<double>(i) - m;
        v += d * d * field.F[i];
    }
    return v;
}

double participation_number(const ProbabilityField& field) {
    double s2 = 0.0;
    for (double f : field.F) s2 += f * f;
    if (s2 == 0.0) {
        throw ValidationError("participation number of an empty field");
    }
    return 1.0 / s2;
}

FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw FitError("fit abscissa and ordinate differ in length");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw FitError("fit needs at least 3 points, got " + std::to_string(n));
    }
    const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xm;
        const double dy = y[i] - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw FitError("fit abscissa has zero spread");
    }
    FitResult r;
    r.n_points = n;
    r.slope = sxy / sxx;
    r.intercept = ym - r.slope * xm;
    r.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 0.0;
    r.derived = r.slope;
    return r;
}

FitResult localization_length_fit(const ProbabilityField& field, const FitWindow& window) {
    const double total = field.total();
    if (!(total > 0.0)) {
        throw FitError("localization fit on an empty field");
    }
    const double centre = local_mean(field) / total;

    struct Site {
        double distance;
        double log_f;
    };
    std::vector<Site> sites;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (field.F[i] > window.floor) {
            sites.push_back({std::abs(static_cast<double>(i) - centre), std::log(field.F[i])});
        }
    }
    std::stable_sort(sites.begin(), sites.end(),
                     [](const Site& l, const Site& r) { return l.distance < r.distance; });
    const auto trim = static_cast<std::size_t>(std::floor(window.trim_fraction * static_cast<double>(sites.size())));
    sites.resize(sites.size() - trim);
    if (sites.size() < 3) {
        throw FitError("too few sites above the noise floor for an exponential fit");
    }

    std::vector<double> x(sites.size()), y(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        x[i] = sites[i].distance;
        y[i] = sites[i].log_f;
    }
    FitResult r = linear_fit(x, y);
    // Anything flatter than this is a plateau, not a decay.
    r.localized = r.slope < -1e-12;
    r.derived = r.localized ? -1.0 / r.slope : std::numeric_limits<double>::infinity();
    return r;
}

FitResult growth_exponent_fit(const ObservableSeries& series, std::int64_t t_min, std::int64_t t_max) {
    if (t_min < 1 || t_max <= t_min) {
        throw FitError("growth fit needs 1 <= t_min < t_max");
    }
    const auto& var = series.column(kVariance);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < series.rows(); ++i) {
        const auto t = series.times[i];
        if (t < t_min || t > t_max) continue;
        if (!(var[i] > 0.0)) {
            throw FitError("zero variance at t = " + std::to_string(t) + " inside the growth window");
        }
        x.push_back(std::log(static_cast<double>(t)));
        y.push_back(std::log(var[i]));
    }
    if (x.size() < 10) {
        throw FitError("growth window holds " + std::to_string(x.size()) + " points, need 10");
    }
    return linear_fit(x, y);
}

double quadratic_coefficient(const ObservableSeries& series, std::int64_t t_min, std::int64_t t_max) {
    const auto& var = series.column(kVariance);
    double num = 0.0, den = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < series.rows(); ++i) {
        const auto t = series.times[i];
        if (t < t_min || t > t_max) continue;
        const double t2 = static_cast<double>(t) * static_cast<double>(t);
        num += t2 * var[i];
        den += t2 * t2;
        ++n;
    }
    if (n == 0 || den == 0.0) {
        throw FitError("quadratic fit window is empty");
    }
    return num / den;
}

PeakReport resonance_peaks(const ProbabilityField& field, std::int64_t q) {
    if (q < 2) {
        throw ValidationError("resonance denominator q must be at least 2");
    }
    const double top = field.F.empty() ? 0.0 : *std::max_element(field.F.begin(), field.F.end());
    if (!(top > 0.0)) {
        throw ValidationError("resonance peak search on an empty field");
    }

    PeakReport report;
    report.q = q;
    const std::size_t n = field.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double f = field.F[i];
        if (f < kPeakProminence * top) continue;
        const double lower = i >= 2 ? field.F[i - 2] : 0.0;
        const double upper = i + 2 < n ? field.F[i + 2] : 0.0;
        if (f > lower && f > upper) {
            report.peaks.push_back({field.k_min + static_cast<std::int64_t>(i), f});
        }
    }
    std::stable_sort(report.peaks.begin(), report.peaks.end(),
                     [](const Peak& l, const Peak& r) { return l.probability > r.probability; });

    // Effective number of occupied sites, (sum F)^2 / sum F^2.
    const double total = field.total();
    const double width = total * total * participation_number(field);
    const auto wanted = static_cast<std::size_t>(std::ceil(width / static_cast<double>(q)));
    report.checked = std::min(std::max<std::size_t>(wanted, 1), report.peaks.size());
    report.aligned = report.checked > 0;
    for (std::size_t i = 0; i < report.checked; ++i) {
        if (distance_to_multiple(report.peaks[i].k, q) > 1) {
            report.aligned = false;
            break;
        }
    }
    return report;
}

}  // namespace qwalk
