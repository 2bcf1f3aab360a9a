#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qwalk {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    double value() const { return hi + lo; }
};

/// Error-free product a*b = p + e.
DoubleDouble two_product(double a, double b);
/// Error-free sum a+b = s + e.
DoubleDouble two_sum(double a, double b);
/// x / (2*pi) to roughly 32 significant digits.
DoubleDouble divide_by_two_pi(double x);

/// Scale parameter Omega = p/q + offset.
///
/// The rational part is reduced exactly in integer arithmetic; the offset
/// carries decimal values, 2*pi*Omega inputs and near-resonance deltas.
/// Only Omega*k^2 mod 1 ever reaches trigonometry.
class Omega {
public:
    Omega() = default;

    static Omega ratio(std::int64_t p, std::int64_t q);
    static Omega decimal(double x);
    static Omega two_pi(double x);

    /// Same value plus delta; delta lands in the extended-precision offset.
    Omega plus(double delta) const;

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    const DoubleDouble& offset() const { return offset_; }

    /// True when Omega*k^2 is an integer for every integer k.
    bool is_integer() const;

    /// Omega*k^2 mod 1, in [0, 1).
    double fractional_k2(std::int64_t k) const;

    /// Nearest double (for display and comparisons only).
    double approx() const;

    std::string describe() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    DoubleDouble offset_{};
};

/// exp(-i 2 pi Omega k^2).
std::complex<double> drift_phase(const Omega& omega, std::int64_t k);

/// Drift phases for k = k_min .. k_min + count - 1.
class PhaseTable {
public:
    PhaseTable() = default;
    PhaseTable(const Omega& omega, std::int64_t k_min, std::size_t count);

    std::int64_t k_min() const { return k_min_; }
    std::size_t size() const { return phases_.size(); }
    std::span<const std::complex<double>> phases() const { return phases_; }
    const std::complex<double>& operator[](std::size_t i) const { return phases_[i]; }

private:
    std::int64_t k_min_ = 0;
    std::vector<std::complex<double>> phases_;
};

}  // namespace qwalk
