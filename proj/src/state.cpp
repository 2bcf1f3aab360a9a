#include "qwalk/state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

InitialCondition InitialCondition::symmetric() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {0, Complex{s, 0.0}, Complex{0.0, s}};
}

double SpinorField::norm_squared() const {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += std::norm(a[i]) + std::norm(b[i]);
    }
    return total;
}

SpinorField new_state(const WalkParams& params, const InitialCondition& init) {
    if (params.half_width <= 0) {
        throw ConfigurationError("half_width must be positive");
    }
    if (init.site < -params.half_width || init.site > params.half_width) {
        throw ConfigurationError("initial site " + std::to_string(init.site) +
                                 " outside lattice [-" + std::to_string(params.half_width) + ", " +
                                 std::to_string(params.half_width) + "]");
    }
    if (!std::isfinite(init.left.real()) || !std::isfinite(init.left.imag()) ||
        !std::isfinite(init.right.real()) || !std::isfinite(init.right.imag())) {
        throw ValidationError("initial chirality must be finite");
    }
    const double n = std::norm(init.left) + std::norm(init.right);
    if (std::abs(n - 1.0) > 1e-9) {
        throw ValidationError("initial chirality not normalized: |cL|^2+|cR|^2 = " + std::to_string(n));
    }

    const auto size = static_cast<std::size_t>(2 * params.half_width + 1);
    SpinorField s;
    s.k_min = -params.half_width;
    s.a.assign(size, Complex{});
    s.b.assign(size, Complex{});
    s.a[s.index(init.site)] = init.left;
    s.b[s.index(init.site)] = init.right;
    return s;
}

double probability_at(const SpinorField& state, std::int64_t k) {
    if (!state.contains(k)) {
        return 0.0;
    }
    const std::size_t i = state.index(k);
    return std::norm(state.a[i]) + std::norm(state.b[i]);
}

}  // namespace qwalk
