#include "qwalk/field.hpp"

#include <algorithm>

#include "qwalk/errors.hpp"

namespace qwalk {

double ProbabilityField::total() const {
    double s = 0.0;
    for (double f : F) s += f;
    return s;
}

bool ObservableSeries::has(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& ObservableSeries::column(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw ConfigurationError("series has no column '" + std::string(name) + "'");
    }
    return columns[static_cast<std::size_t>(it - names.begin())];
}

std::vector<std::string> all_observables() {
    return {std::string(kVariance), std::string(kMean), std::string(kParticipation),
            std::string(kBoundaryLeak)};
}

}  // namespace qwalk
