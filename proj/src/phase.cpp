#include "qwalk/phase.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// 2*pi split as hi + lo.
constexpr double kTwoPiHi = 6.283185307179586232;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

__extension__ typedef __int128 Int128;

double frac01(double x) {
    double r = x - std::floor(x);
    // x - floor(x) can round up to exactly 1 for tiny negative x.
    return r >= 1.0 ? 0.0 : r;
}

}  // namespace

DoubleDouble two_product(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

DoubleDouble divide_by_two_pi(double x) {
    double q1 = x / kTwoPiHi;
    // r = x - q1 * 2pi, the first product taken exactly.
    DoubleDouble prod = two_product(q1, kTwoPiHi);
    double r = ((x - prod.hi) - prod.lo) - q1 * kTwoPiLo;
    double q2 = r / kTwoPiHi;
    DoubleDouble s = two_sum(q1, q2);
    return s;
}

Omega Omega::ratio(std::int64_t p, std::int64_t q) {
    if (q <= 0) {
        throw ConfigurationError("omega denominator must be positive");
    }
    std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    if (g == 0) g = 1;
    Omega o;
    o.num_ = p / g;
    o.den_ = q / g;
    return o;
}

Omega Omega::decimal(double x) {
    if (!std::isfinite(x)) {
        throw ConfigurationError("omega must be finite");
    }
    Omega o;
    o.offset_ = {x, 0.0};
    return o;
}

Omega Omega::two_pi(double x) {
    if (!std::isfinite(x)) {
        throw ConfigurationError("2*pi*omega must be finite");
    }
    Omega o;
    o.offset_ = divide_by_two_pi(x);
    return o;
}

Omega Omega::plus(double delta) const {
    if (!std::isfinite(delta)) {
        throw ConfigurationError("delta must be finite");
    }
    Omega o = *this;
    DoubleDouble s = two_sum(offset_.hi, delta);
    s.lo += offset_.lo;
    o.offset_ = two_sum(s.hi, s.lo);
    return o;
}

bool Omega::is_integer() const {
    return den_ == 1 && offset_.hi == 0.0 && offset_.lo == 0.0;
}

double Omega::fractional_k2(std::int64_t k) const {
    const Int128 k2 = static_cast<Int128>(k) * k;
    Int128 m = (static_cast<Int128>(num_) * (k2 % den_)) % den_;
    if (m < 0) m += den_;
    double rational = static_cast<double>(m) / static_cast<double>(den_);

    if (offset_.hi == 0.0 && offset_.lo == 0.0) {
        return rational;
    }
    // k^2 is exact in a double for |k| < 2^26.
    const double kk = static_cast<double>(k2);
    DoubleDouble p = two_product(offset_.hi, kk);
    double whole = frac01(p.hi);
    double tail = p.lo + offset_.lo * kk;
    return frac01(frac01(whole + rational) + tail);
}

double Omega::approx() const {
    return static_cast<double>(num_) / static_cast<double>(den_) + offset_.hi + offset_.lo;
}

std::string Omega::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << num_ << '/' << den_;
    if (offset_.hi != 0.0 || offset_.lo != 0.0) {
        os << (offset_.hi < 0 ? "-" : "+") << std::abs(offset_.hi);
        if (offset_.lo != 0.0) os << (offset_.lo < 0 ? "-" : "+") << std::abs(offset_.lo);
    }
    return os.str();
}

std::complex<double> drift_phase(const Omega& omega, std::int64_t k) {
    double f = omega.fractional_k2(k);
    if (f == 0.0) {
        return {1.0, 0.0};
    }
    // Centre on zero so the argument stays in [-pi, pi).
    if (f >= 0.5) f -= 1.0;
    const double angle = 2.0 * std::numbers::pi * f;
    return {std::cos(angle), -std::sin(angle)};
}

PhaseTable::PhaseTable(const Omega& omega, std::int64_t k_min, std::size_t count)
    : k_min_(k_min), phases_(count) {
    for (std::size_t i = 0; i < count; ++i) {
        phases_[i] = drift_phase(omega, k_min + static_cast<std::int64_t>(i));
    }
}

}  // namespace qwalk
