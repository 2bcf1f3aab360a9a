#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk {

/// Real probability distribution F_k on k_min .. k_min + size - 1.
struct ProbabilityField {
    std::int64_t k_min = 0;
    std::vector<double> F;
    std::int64_t t = 0;

    std::size_t size() const { return F.size(); }
    std::int64_t k_max() const { return k_min + static_cast<std::int64_t>(F.size()) - 1; }
    bool contains(std::int64_t k) const { return k >= k_min && k <= k_max(); }
    double at(std::int64_t k) const { return contains(k) ? F[static_cast<std::size_t>(k - k_min)] : 0.0; }
    double total() const;
};

/// Time-indexed observable columns. Column order follows insertion.
struct ObservableSeries {
    std::vector<std::int64_t> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    bool has(std::string_view name) const;
    /// Throws ConfigurationError for an unknown column.
    const std::vector<double>& column(std::string_view name) const;
    std::size_t rows() const { return times.size(); }
};

/// Observable names understood by the evolve drivers.
inline constexpr std::string_view kVariance = "variance";
inline constexpr std::string_view kMean = "mean";
inline constexpr std::string_view kParticipation = "participation";
inline constexpr std::string_view kBoundaryLeak = "boundary_leak";

std::vector<std::string> all_observables();

}  // namespace qwalk
