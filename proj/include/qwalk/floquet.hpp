#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qwalk/phase.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

/// Quasienergy w of the one-step eigenvalue exp(-i w), kept in [0, 2 pi).
class QuasiEnergy {
public:
    explicit QuasiEnergy(double w);
    double value() const { return w_; }

private:
    double w_;
};

/// f_k = sqrt2 exp(i (2 pi Omega k^2 - w)).
Complex floquet_factor(const Omega& omega, QuasiEnergy w, std::int64_t k);

/// Per-site coefficients of the second-order and banded (Anderson) forms on
/// k_min .. k_min + size - 1.
///
///   g_k       = i (f_{k+1} - conj f_k)
///   g~_k      = i (f_{k-1} - conj f_k)
///   T_k       = gi_k (gi_{k-1} + gi_{k+1}) + gi_{k+1} gi_{k-1} |g_k|^2
///   W_{k,k+2} = gi_k gi_{k-1}
///   W_{k,k+1} = -gi_{k-1} (gr_{k+1} gi_k + gi_{k+1} gr_k)
///   W_{k,k-1} = -gi_{k+1} (gr_{k-1} gi_k + gi_{k-1} gr_k)
///   W_{k,k-2} = gi_k gi_{k+1}
///
/// with gr, gi the real and imaginary parts of g. f is evaluated two sites
/// beyond each end so every stored T and W is complete.
struct AndersonCoefficients {
    std::int64_t k_min = 0;
    std::vector<Complex> f;
    std::vector<Complex> g;
    std::vector<Complex> g_tilde;
    std::vector<double> T;
    /// Hopping to offsets l - k = -2, -1, +1, +2.
    std::vector<std::array<double, 4>> W;
    /// Every gi vanishes (for instance Omega = 0): T and W are identically zero.
    bool degenerate = false;

    std::size_t size() const { return f.size(); }
    std::int64_t k_max() const { return k_min + static_cast<std::int64_t>(f.size()) - 1; }
    std::size_t index(std::int64_t k) const { return static_cast<std::size_t>(k - k_min); }

    /// W_kl, zero for l == k and |l - k| > 2.
    double hopping(std::int64_t k, std::int64_t l) const;
};

/// Throws ValidationError unless k_hi - k_lo >= 6.
AndersonCoefficients coefficients(const Omega& omega, QuasiEnergy w, std::int64_t k_lo, std::int64_t k_hi);

/// Solution of the eigenvalue equations
///   f_k a_k = a_{k+1} + b_{k+1},   f_k b_k = a_{k-1} - b_{k-1}
/// on k_min .. k_max, grown from a seed at k = 0.
struct FloquetPair {
    std::int64_t k_min = 0;
    std::vector<Complex> a;
    std::vector<Complex> b;
    QuasiEnergy w{0.0};
    /// Largest relative residual of either equation over interior sites.
    double max_residual = 0.0;
    /// ln(|a|+|b| at the edge / at the seed) per site, upward and downward.
    double growth_up = 0.0;
    double growth_down = 0.0;

    std::size_t size() const { return a.size(); }
};

inline constexpr double kFloquetResidualLimit = 1e-10;

/// Upward: b_{k+1} = (a_k - b_k)/f_{k+1}, a_{k+1} = f_k a_k - b_{k+1}.
/// Downward: a_{k-1} = (a_k + b_k)/f_{k-1}, b_{k-1} = a_{k-1} - f_k b_k.
/// The whole solution is rescaled to unit peak magnitude every 32 sites.
FloquetPair floquet_recursion(const Omega& omega, QuasiEnergy w, Complex a0, Complex b0,
                              std::int64_t k_lo, std::int64_t k_hi);

struct TransformedPair {
    std::int64_t k_min = 0;
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
};

/// (alpha_k, beta_k) = i^k f_k (a_k, b_k).
TransformedPair transform(const FloquetPair& pair, const AndersonCoefficients& coeffs);

/// alpha_{k+1} = g_k alpha_k - alpha_{k-1} from the first two values,
/// over the full coefficient range.
std::vector<Complex> generate_alpha(const AndersonCoefficients& coeffs, Complex first, Complex second);

enum class Component { Alpha, Beta };

struct ResidualReport {
    double max = 0.0;
    double median = 0.0;
    std::int64_t first_site = 0;     ///< k of per_site[0]
    std::vector<double> per_site;
    bool degenerate = false;
};

/// |g_k x_k - x_{k+1} - x_{k-1}| / max |x| over the three sites (g~ for Beta).
ResidualReport second_order_residual(std::span<const Complex> sequence, const AndersonCoefficients& coeffs,
                                     Component component = Component::Alpha);

/// |T_k x_k + sum_l W_kl x_l| / (|T_k x_k| + sum_l |W_kl x_l|) over sites
/// with both second neighbours inside the range.
ResidualReport anderson_residual(std::span<const Complex> alpha, const AndersonCoefficients& coeffs);

/// Sample autocorrelation at `lag` (lagged covariance over the full-length
/// variance); NaN for a constant sequence.
double autocorrelation(std::span<const double> values, std::size_t lag);

/// Smallest p <= max_period with |x_{k+p} - x_k| <= tolerance for all k.
std::optional<std::size_t> smallest_period(std::span<const double> values, std::size_t max_period,
                                           double tolerance);

struct KineticStatistics {
    std::int64_t k_first = 0;
    std::vector<double> T;
    double min = 0.0;
    double max = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double lag1 = 0.0;
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;
    bool degenerate = false;

    double range() const { return max - min; }
    double iqr() const { return q3 - q1; }
    /// IQR below a quarter of the full range.
    bool narrowly_peaked() const { return !degenerate && iqr() < range() / 4.0; }
    /// |lag-1 autocorrelation| below 0.3.
    bool pseudo_random() const { return !degenerate && std::abs(lag1) < 0.3; }
};

/// T_k for k = k_first .. k_first + n_sites - 1 and its distribution.
/// Throws ValidationError for n_sites < 100.
KineticStatistics kinetic_statistics(const Omega& omega, QuasiEnergy w, std::int64_t n_sites,
                                     std::int64_t k_first = 0, std::size_t bins = 32);

}  // namespace qwalk
