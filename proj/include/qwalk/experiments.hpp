#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/phase.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

enum class Experiment { Evolve, Distribution, VarianceScan, NearResonanceScan, AndersonCheck, KineticStats };

std::string_view experiment_name(Experiment e);

/// One way of spelling Omega, kept verbatim for the CSV header.
struct OmegaSpec {
    enum class Kind { Ratio, Decimal, TwoPi, Markov };
    Kind kind = Kind::Ratio;
    std::string text;  ///< as given, e.g. "1/11", "0.0159", "2pi:0.1", "markov"
    Omega value;
};

/// "p/q" | decimal | "2pi:x" | "markov".
OmegaSpec parse_omega_token(std::string_view token);
OmegaSpec parse_ratio(std::string_view text);
OmegaSpec parse_decimal(std::string_view text);
OmegaSpec parse_two_pi(std::string_view text);

/// "cL_re,cL_im,cR_re,cR_im@k0".
InitialCondition parse_init(std::string_view text);

/// Comma-separated reals.
std::vector<double> parse_real_list(std::string_view text);

struct RunSpec {
    Experiment experiment = Experiment::Evolve;

    std::optional<OmegaSpec> omega;
    std::vector<double> deltas;
    std::vector<OmegaSpec> omegas;  ///< variance-scan list

    std::int64_t steps = 2000;
    std::optional<std::int64_t> half_width;  ///< default steps + |k0| + 64
    InitialCondition init = InitialCondition::symmetric();
    std::string init_text = "default";
    std::int64_t stride = 1;
    std::string out;

    bool markov = false;           ///< evolve the interference-free chain instead
    bool markov_baseline = false;  ///< evolve: add a variance_markov column
    std::optional<std::int64_t> q; ///< distribution: resonance denominator
    std::int64_t fit_t_min = 500;
    std::optional<std::int64_t> fit_t_max;

    // anderson-check / kinetic-stats
    std::int64_t w_count = 64;
    std::vector<double> w_list;
    std::int64_t k_lo = -200;
    std::int64_t k_hi = 200;
    Complex seed_a{1.0, 0.0};
    Complex seed_b{0.0, 0.0};
    double w = 0.0;
    std::int64_t n_sites = 1000;
    std::int64_t k_first = 0;

    std::int64_t effective_half_width() const;
    WalkParams walk_params(const Omega& omega) const;
    /// Canonical single-line description, embedded in every CSV.
    std::string describe() const;
    /// Throws ConfigurationError when the combination of fields is invalid.
    void validate() const;
};

/// 17 significant digits, '.' separator, "nan"/"inf"/"-inf".
std::string format_real(double v);

struct CsvTable {
    std::string comment;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
};

struct RunOutput {
    CsvTable table;
    /// Extra files written next to the CSV: (suffix, content).
    std::vector<std::pair<std::string, std::string>> sidecars;
    /// Some rows failed; the scan went on, but the run counts as an error.
    bool had_errors = false;
};

/// Thresholds for the Floquet -> second-order -> Anderson chain.
inline constexpr double kRecursionThreshold = 1e-10;
inline constexpr double kSecondOrderThreshold = 1e-12;
inline constexpr double kAndersonThreshold = 1e-12;

RunOutput run_evolve(const RunSpec& spec);
RunOutput run_distribution(const RunSpec& spec);
RunOutput run_variance_scan(const RunSpec& spec);
RunOutput run_near_resonance_scan(const RunSpec& spec);
RunOutput run_anderson_check(const RunSpec& spec);
RunOutput run_kinetic_stats(const RunSpec& spec);

RunOutput run(const RunSpec& spec);

/// Writes the CSV and its sidecars. Output goes through temporary files, so
/// a failure leaves nothing behind.
void write_output(const RunOutput& output, const std::string& path);

}  // namespace qwalk
