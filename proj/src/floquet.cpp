#include "qwalk/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kRescaleEvery = 32;
// Below this every gi is rounding noise.
constexpr double kDegenerateImag = 1e-13;

/// i^k z, exact.
Complex times_i_power(Complex z, std::int64_t k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return z;
        case 1: return {-z.imag(), z.real()};
        case 2: return {-z.real(), -z.imag()};
        default: return {z.imag(), -z.real()};
    }
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

/// Linear-interpolated quantile of sorted data, position (n - 1) p.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

void summarize(ResidualReport& r) {
    if (r.per_site.empty()) {
        r.degenerate = true;
        return;
    }
    r.max = *std::max_element(r.per_site.begin(), r.per_site.end());
    r.median = median_of(r.per_site);
}

double relative(double num, double scale) { return scale > 0.0 ? num / scale : 0.0; }

}  // namespace

QuasiEnergy::QuasiEnergy(double w) {
    if (!std::isfinite(w)) {
        throw ValidationError("quasienergy must be finite");
    }
    double r = std::fmod(w, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    w_ = r;
}

Complex floquet_factor(const Omega& omega, QuasiEnergy w, std::int64_t k) {
    double phi = omega.fractional_k2(k);
    if (phi >= 0.5) phi -= 1.0;
    const double angle = kTwoPi * phi - w.value();
    return {std::numbers::sqrt2 * std::cos(angle), std::numbers::sqrt2 * std::sin(angle)};
}

double AndersonCoefficients::hopping(std::int64_t k, std::int64_t l) const {
    const std::int64_t d = l - k;
    if (k < k_min || k > k_max() || d == 0 || d < -2 || d > 2) return 0.0;
    const std::size_t slot = d < 0 ? static_cast<std::size_t>(d + 2) : static_cast<std::size_t>(d + 1);
    return W[index(k)][slot];
}

AndersonCoefficients coefficients(const Omega& omega, QuasiEnergy w, std::int64_t k_lo, std::int64_t k_hi) {
    if (k_hi - k_lo < 6) {
        throw ValidationError("coefficient range needs at least 7 sites");
    }
    const auto n = static_cast<std::size_t>(k_hi - k_lo + 1);
    // f on [k_lo - 2, k_hi + 2]; g on [k_lo - 2, k_hi + 1].
    std::vector<Complex> fx(n + 4);
    for (std::size_t i = 0; i < fx.size(); ++i) {
        fx[i] = floquet_factor(omega, w, k_lo - 2 + static_cast<std::int64_t>(i));
    }
    const Complex I{0.0, 1.0};
    std::vector<Complex> gx(n + 3);
    for (std::size_t i = 0; i < gx.size(); ++i) {
        gx[i] = I * (fx[i + 1] - std::conj(fx[i]));
    }
    AndersonCoefficients c;
    c.k_min = k_lo;
    c.f.assign(fx.begin() + 2, fx.begin() + 2 + static_cast<std::ptrdiff_t>(n));
    c.g.resize(n);
    c.g_tilde.resize(n);
    c.T.resize(n);
    c.W.resize(n);

    double max_imag = 0.0;
    for (std::size_t s = 0; s + 2 < gx.size(); ++s) max_imag = std::max(max_imag, std::abs(gx[s + 1].imag()));
    c.degenerate = max_imag <= kDegenerateImag;

    // Site k sits at index k - k_lo + 2 of both fx and gx.
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t fi = s + 2;
        c.g[s] = gx[fi];
        c.g_tilde[s] = I * (fx[fi - 1] - std::conj(fx[fi]));

        const double gim = gx[fi - 1].imag(), gi0 = gx[fi].imag(), gip = gx[fi + 1].imag();
        const double grm = gx[fi - 1].real(), gr0 = gx[fi].real(), grp = gx[fi + 1].real();

        c.T[s] = gi0 * (gim + gip) + gip * gim * (gr0 * gr0 + gi0 * gi0);
        c.W[s] = {
            gi0 * gip,                        // l = k - 2
            -gip * (grm * gi0 + gim * gr0),   // l = k - 1
            -gim * (grp * gi0 + gip * gr0),   // l = k + 1
            gi0 * gim,                        // l = k + 2
        };
    }
    return c;
}

FloquetPair floquet_recursion(const Omega& omega, QuasiEnergy w, Complex a0, Complex b0,
                              std::int64_t k_lo, std::int64_t k_hi) {
    if (a0 == Complex{} && b0 == Complex{}) {
        throw ValidationError("Floquet seed (a_0, b_0) must not be zero");
    }
    if (k_lo > 0 || k_hi < 0 || k_hi - k_lo < 2) {
        throw ValidationError("Floquet range must contain 0 and at least 3 sites");
    }
    const auto n = static_cast<std::size_t>(k_hi - k_lo + 1);
    std::vector<Complex> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = floquet_factor(omega, w, k_lo + static_cast<std::int64_t>(i));

    FloquetPair p;
    p.k_min = k_lo;
    p.w = w;
    p.a.assign(n, Complex{});
    p.b.assign(n, Complex{});
    const auto z = static_cast<std::size_t>(-k_lo);
    p.a[z] = a0;
    p.b[z] = b0;

    std::size_t lo = z, hi = z;
    auto rescale = [&] {
        double m = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) m = std::max({m, std::abs(p.a[i]), std::abs(p.b[i])});
        if (m > 0.0 && std::isfinite(m)) {
            for (std::size_t i = lo; i <= hi; ++i) {
                p.a[i] /= m;
                p.b[i] /= m;
            }
        }
    };
    auto check_finite = [&](std::size_t i) {
        if (!std::isfinite(p.a[i].real()) || !std::isfinite(p.a[i].imag()) ||
            !std::isfinite(p.b[i].real()) || !std::isfinite(p.b[i].imag())) {
            throw NumericError("Floquet recursion overflowed at k = " +
                               std::to_string(k_lo + static_cast<std::int64_t>(i)));
        }
    };

    for (std::size_t i = z; i + 1 < n; ++i) {
        p.b[i + 1] = (p.a[i] - p.b[i]) / f[i + 1];
        p.a[i + 1] = f[i] * p.a[i] - p.b[i + 1];
        hi = i + 1;
        check_finite(hi);
        if ((hi - z) % kRescaleEvery == 0) rescale();
    }
    for (std::size_t i = z; i > 0; --i) {
        p.a[i - 1] = (p.a[i] + p.b[i]) / f[i - 1];
        p.b[i - 1] = p.a[i - 1] - f[i] * p.b[i];
        lo = i - 1;
        check_finite(lo);
        if ((z - lo) % kRescaleEvery == 0) rescale();
    }
    rescale();

    auto mag = [&](std::size_t i) { return std::abs(p.a[i]) + std::abs(p.b[i]); };
    const double seed = mag(z);
    if (seed > 0.0) {
        if (k_hi > 0) p.growth_up = std::log(mag(n - 1) / seed) / static_cast<double>(k_hi);
        if (k_lo < 0) p.growth_down = std::log(mag(0) / seed) / static_cast<double>(-k_lo);
    }

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Complex fa = f[i] * p.a[i];
        const Complex fb = f[i] * p.b[i];
        const double e1 = relative(std::abs(fa - p.a[i + 1] - p.b[i + 1]),
                                   std::max(std::abs(fa), std::abs(p.a[i + 1]) + std::abs(p.b[i + 1])));
        const double e2 = relative(std::abs(fb - p.a[i - 1] + p.b[i - 1]),
                                   std::max(std::abs(fb), std::abs(p.a[i - 1]) + std::abs(p.b[i - 1])));
        worst = std::max({worst, e1, e2});
    }
    p.max_residual = worst;
    if (!(worst < kFloquetResidualLimit)) {
        throw NumericError("Floquet recursion fails its own equations: residual " + std::to_string(worst));
    }
    return p;
}

TransformedPair transform(const FloquetPair& pair, const AndersonCoefficients& coeffs) {
    if (pair.k_min != coeffs.k_min || pair.size() != coeffs.size()) {
        throw ValidationError("Floquet pair and coefficients cover different ranges");
    }
    TransformedPair t;
    t.k_min = pair.k_min;
    t.alpha.resize(pair.size());
    t.beta.resize(pair.size());
    for (std::size_t i = 0; i < pair.size(); ++i) {
        const std::int64_t k = pair.k_min + static_cast<std::int64_t>(i);
        t.alpha[i] = times_i_power(coeffs.f[i] * pair.a[i], k);
        t.beta[i] = times_i_power(coeffs.f[i] * pair.b[i], k);
    }
    return t;
}

std::vector<Complex> generate_alpha(const AndersonCoefficients& coeffs, Complex first, Complex second) {
    std::vector<Complex> alpha(coeffs.size());
    if (alpha.empty()) return alpha;
    alpha[0] = first;
    if (alpha.size() > 1) alpha[1] = second;
    for (std::size_t i = 1; i + 1 < alpha.size(); ++i) {
        alpha[i + 1] = coeffs.g[i] * alpha[i] - alpha[i - 1];
    }
    return alpha;
}

ResidualReport second_order_residual(std::span<const Complex> x, const AndersonCoefficients& coeffs,
                                     Component component) {
    if (x.size() != coeffs.size()) {
        throw ValidationError("sequence and coefficients cover different ranges");
    }
    if (x.size() < 3) {
        throw ValidationError("second-order residual needs at least 3 sites");
    }
    const auto& g = component == Component::Alpha ? coeffs.g : coeffs.g_tilde;
    ResidualReport r;
    r.first_site = coeffs.k_min + 1;
    bool any_scale = false;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double scale = std::max({std::abs(x[i - 1]), std::abs(x[i]), std::abs(x[i + 1])});
        any_scale = any_scale || scale > 0.0;
        r.per_site.push_back(relative(std::abs(g[i] * x[i] - x[i + 1] - x[i - 1]), scale));
    }
    summarize(r);
    r.degenerate = r.degenerate || !any_scale;
    return r;
}

ResidualReport anderson_residual(std::span<const Complex> x, const AndersonCoefficients& coeffs) {
    if (x.size() != coeffs.size()) {
        throw ValidationError("sequence and coefficients cover different ranges");
    }
    if (x.size() < 7) {
        throw ValidationError("Anderson residual needs at least 7 sites");
    }
    ResidualReport r;
    r.first_site = coeffs.k_min + 2;
    if (coeffs.degenerate) {
        r.degenerate = true;
        return r;
    }
    bool any_scale = false;
    for (std::size_t i = 2; i + 2 < x.size(); ++i) {
        const auto& w = coeffs.W[i];
        const Complex terms[5] = {coeffs.T[i] * x[i], w[0] * x[i - 2], w[1] * x[i - 1], w[2] * x[i + 1],
                                  w[3] * x[i + 2]};
        Complex sum{};
        double scale = 0.0;
        for (const auto& t : terms) {
            sum += t;
            scale += std::abs(t);
        }
        any_scale = any_scale || scale > 0.0;
        r.per_site.push_back(relative(std::abs(sum), scale));
    }
    summarize(r);
    r.degenerate = r.degenerate || !any_scale;
    return r;
}

double autocorrelation(std::span<const double> v, std::size_t lag) {
    if (v.size() <= lag + 1) return std::numeric_limits<double>::quiet_NaN();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double den = 0.0, num = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - mean;
        den += d * d;
        if (i + lag < v.size()) num += d * (v[i + lag] - mean);
    }
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

std::optional<std::size_t> smallest_period(std::span<const double> v, std::size_t max_period, double tolerance) {
    for (std::size_t p = 1; p <= max_period && p < v.size(); ++p) {
        bool ok = true;
        for (std::size_t i = 0; i + p < v.size() && ok; ++i) {
            ok = std::abs(v[i + p] - v[i]) <= tolerance;
        }
        if (ok) return p;
    }
    return std::nullopt;
}

KineticStatistics kinetic_statistics(const Omega& omega, QuasiEnergy w, std::int64_t n_sites,
                                     std::int64_t k_first, std::size_t bins) {
    if (n_sites < 100) {
        throw ValidationError("kinetic statistics need at least 100 sites");
    }
    if (bins == 0) {
        throw ValidationError("histogram needs at least one bin");
    }
    const auto c = coefficients(omega, w, k_first, k_first + n_sites - 1);
    KineticStatistics s;
    s.k_first = k_first;
    s.T = c.T;

    std::vector<double> sorted = s.T;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.degenerate = c.degenerate || s.max == s.min;
    s.lag1 = autocorrelation(s.T, 1);

    s.bin_edges.resize(bins + 1);
    s.counts.assign(bins, 0);
    const double width = s.range() / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) s.bin_edges[i] = s.min + width * static_cast<double>(i);
    s.bin_edges.back() = s.max;
    for (double t : s.T) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>((t - s.min) / width) : 0;
        s.counts[std::min(b, bins - 1)] += 1;
    }
    return s;
}

}  // namespace qwalk
