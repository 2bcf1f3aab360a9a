#include "qwalk/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/floquet.hpp"
#include "qwalk/observables.hpp"

namespace qwalk {

namespace {

constexpr std::int64_t kDefaultMargin = 64;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view text, std::string_view what) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigurationError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
    text = trim(text);
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigurationError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

std::string join_reals(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_real(v[i]);
    }
    return s;
}

std::string comment_for(const RunSpec& spec) { return "# qwalk " + spec.describe(); }

// Wrong-parity sites are exactly empty for a single-site start.
bool parity_occupied(std::int64_t k, std::int64_t k0, std::int64_t t) { return ((k - k0 + t) % 2 + 2) % 2 == 0; }

nlohmann::ordered_json fit_json(const FitResult& f) {
    nlohmann::ordered_json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.r_squared;
    j["n_points"] = f.n_points;
    j["localization_length"] = f.localized ? nlohmann::ordered_json(f.derived) : nlohmann::ordered_json("inf");
    j["localized"] = f.localized;
    return j;
}

struct CoherentRun {
    ObservableSeries series;
    SpinorField state;
};

CoherentRun run_coherent(const RunSpec& spec, const Omega& omega, std::int64_t stride) {
    const WalkParams params = spec.walk_params(omega);
    EvolveOptions opts;
    opts.stride = stride;
    auto result = evolve(new_state(params, spec.init), params, opts);
    return {std::move(result.series), std::move(result.final_state)};
}

ObservableSeries run_chain(const RunSpec& spec, std::int64_t stride) {
    const WalkParams params = spec.walk_params(Omega{});
    EvolveOptions opts;
    opts.stride = stride;
    return evolve_markov(delta_field(params, spec.init.site), params, opts).series;
}

std::int64_t fit_max(const RunSpec& spec) { return spec.fit_t_max.value_or(spec.steps); }

}  // namespace

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Evolve: return "evolve";
        case Experiment::Distribution: return "distribution";
        case Experiment::VarianceScan: return "variance-scan";
        case Experiment::NearResonanceScan: return "near-resonance-scan";
        case Experiment::AndersonCheck: return "anderson-check";
        case Experiment::KineticStats: return "kinetic-stats";
    }
    return "unknown";
}

OmegaSpec parse_ratio(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        const auto p = parse_int(text, "omega numerator");
        return {OmegaSpec::Kind::Ratio, std::string(text), Omega::ratio(p, 1)};
    }
    const auto p = parse_int(text.substr(0, slash), "omega numerator");
    const auto q = parse_int(text.substr(slash + 1), "omega denominator");
    if (q <= 0) {
        throw ConfigurationError("omega denominator must be positive in '" + std::string(text) + "'");
    }
    return {OmegaSpec::Kind::Ratio, std::string(text), Omega::ratio(p, q)};
}

OmegaSpec parse_decimal(std::string_view text) {
    text = trim(text);
    return {OmegaSpec::Kind::Decimal, std::string(text), Omega::decimal(parse_real(text, "omega"))};
}

OmegaSpec parse_two_pi(std::string_view text) {
    text = trim(text);
    return {OmegaSpec::Kind::TwoPi, "2pi:" + std::string(text), Omega::two_pi(parse_real(text, "2*pi*omega"))};
}

OmegaSpec parse_omega_token(std::string_view token) {
    token = trim(token);
    if (token == "markov") {
        return {OmegaSpec::Kind::Markov, "markov", Omega{}};
    }
    if (token.starts_with("2pi:")) {
        return parse_two_pi(token.substr(4));
    }
    if (token.find_first_of(".eE") != std::string_view::npos) {
        return parse_decimal(token);
    }
    return parse_ratio(token);
}

InitialCondition parse_init(std::string_view text) {
    text = trim(text);
    const auto at = text.find('@');
    if (at == std::string_view::npos) {
        throw ConfigurationError("--init expects cL_re,cL_im,cR_re,cR_im@k0");
    }
    const auto parts = split(text.substr(0, at), ',');
    if (parts.size() != 4) {
        throw ConfigurationError("--init expects four chirality components");
    }
    InitialCondition c;
    c.left = {parse_real(parts[0], "init"), parse_real(parts[1], "init")};
    c.right = {parse_real(parts[2], "init"), parse_real(parts[3], "init")};
    c.site = parse_int(text.substr(at + 1), "init site");
    return c;
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (auto part : split(text, ',')) out.push_back(parse_real(part, "list entry"));
    return out;
}

std::int64_t RunSpec::effective_half_width() const {
    if (half_width) return *half_width;
    const std::int64_t site = init.site < 0 ? -init.site : init.site;
    return steps + site + kDefaultMargin;
}

WalkParams RunSpec::walk_params(const Omega& omega) const {
    WalkParams p;
    p.omega = omega;
    p.half_width = effective_half_width();
    p.steps = steps;
    return p;
}

void RunSpec::validate() const {
    if (steps < 1) throw ConfigurationError("--steps must be at least 1");
    if (stride < 1) throw ConfigurationError("--stride must be at least 1");
    if (half_width && *half_width < 1) throw ConfigurationError("--half-width must be positive");
    if (!deltas.empty()) {
        if (!omega || omega->kind != OmegaSpec::Kind::Ratio) {
            throw ConfigurationError("--delta needs a rational base omega (--omega p/q)");
        }
        for (double d : deltas) {
            if (d < 0.0) throw ConfigurationError("delta must be non-negative");
        }
    }
    switch (experiment) {
        case Experiment::Evolve:
        case Experiment::Distribution:
            if (!omega && !markov) throw ConfigurationError("an omega is required");
            if (deltas.size() > 1) throw ConfigurationError("a single --delta is allowed here");
            if (experiment == Experiment::Distribution && markov) {
                throw ConfigurationError("distribution is defined for the coherent walk only");
            }
            if (q && *q < 2) throw ConfigurationError("--q must be at least 2");
            break;
        case Experiment::VarianceScan:
            if (omegas.empty()) throw ConfigurationError("variance-scan needs at least one omega");
            if (fit_t_min < 1 || fit_max(*this) <= fit_t_min || fit_max(*this) > steps) {
                throw ConfigurationError("fit window must satisfy 1 <= t_min < t_max <= steps");
            }
            break;
        case Experiment::NearResonanceScan:
            if (!omega || omega->kind != OmegaSpec::Kind::Ratio) {
                throw ConfigurationError("near-resonance-scan needs a rational base omega");
            }
            if (deltas.empty()) throw ConfigurationError("near-resonance-scan needs a non-empty --delta list");
            break;
        case Experiment::AndersonCheck:
            if (!omega) throw ConfigurationError("an omega is required");
            if (w_list.empty() && w_count < 1) throw ConfigurationError("the w grid is empty");
            if (k_lo > 0 || k_hi < 0 || k_hi - k_lo < 6) {
                throw ConfigurationError("k range must contain 0 and span at least 7 sites");
            }
            break;
        case Experiment::KineticStats:
            if (!omega) throw ConfigurationError("an omega is required");
            if (n_sites < 100) throw ConfigurationError("--sites must be at least 100");
            break;
    }
}

std::string RunSpec::describe() const {
    std::ostringstream os;
    os << experiment_name(experiment);
    if (omega) os << " omega=" << omega->text;
    if (!deltas.empty()) os << " delta=" << join_reals(deltas);
    if (!omegas.empty()) {
        os << " omegas=";
        for (std::size_t i = 0; i < omegas.size(); ++i) os << (i ? "," : "") << omegas[i].text;
    }
    switch (experiment) {
        case Experiment::AndersonCheck:
            os << " k_range=" << k_lo << ".." << k_hi << " seed=" << format_real(seed_a.real()) << ','
               << format_real(seed_a.imag()) << ',' << format_real(seed_b.real()) << ','
               << format_real(seed_b.imag());
            if (w_list.empty()) {
                os << " w_count=" << w_count;
            } else {
                os << " w=" << join_reals(w_list);
            }
            break;
        case Experiment::KineticStats:
            os << " w=" << format_real(w) << " sites=" << n_sites << " k_first=" << k_first;
            break;
        default:
            os << " steps=" << steps << " half_width=" << effective_half_width() << " init=" << init_text
               << " (" << format_real(init.left.real()) << ',' << format_real(init.left.imag()) << ','
               << format_real(init.right.real()) << ',' << format_real(init.right.imag()) << '@' << init.site
               << ") stride=" << stride;
            if (markov) os << " markov=1";
            if (markov_baseline) os << " markov_baseline=1";
            if (q) os << " q=" << *q;
            if (experiment == Experiment::VarianceScan) os << " fit=" << fit_t_min << ".." << fit_max(*this);
            break;
    }
    return os.str();
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw NumericError("cannot format value");
    return std::string(buf, ptr);
}

std::string CsvTable::str() const {
    std::string s;
    if (!comment.empty()) s += comment + '\n';
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) s += ',';
        s += header[i];
    }
    s += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += row[i];
        }
        s += '\n';
    }
    return s;
}

RunOutput run_evolve(const RunSpec& spec) {
    spec.validate();
    RunOutput out;
    out.table.comment = comment_for(spec);
    out.table.header = {"t", "variance", "mean", "participation", "boundary_leak"};

    ObservableSeries series;
    if (spec.markov) {
        series = run_chain(spec, spec.stride);
    } else {
        Omega omega = spec.omega->value;
        if (!spec.deltas.empty()) omega = omega.plus(spec.deltas.front());
        series = run_coherent(spec, omega, spec.stride).series;
    }
    std::vector<double> baseline;
    if (spec.markov_baseline) {
        out.table.header.push_back("variance_markov");
        baseline = run_chain(spec, spec.stride).column(kVariance);
    }

    const auto& var = series.column(kVariance);
    const auto& mean = series.column(kMean);
    const auto& pn = series.column(kParticipation);
    const auto& leak = series.column(kBoundaryLeak);
    for (std::size_t i = 0; i < series.rows(); ++i) {
        std::vector<std::string> row = {format_int(series.times[i]), format_real(var[i]), format_real(mean[i]),
                                        format_real(pn[i]), format_real(leak[i])};
        if (spec.markov_baseline) row.push_back(format_real(baseline[i]));
        out.table.rows.push_back(std::move(row));
    }
    return out;
}

RunOutput run_distribution(const RunSpec& spec) {
    spec.validate();
    Omega omega = spec.omega->value;
    if (!spec.deltas.empty()) omega = omega.plus(spec.deltas.front());
    const auto run = run_coherent(spec, omega, spec.steps);
    const ProbabilityField field = distribution(run.state);

    RunOutput out;
    out.table.comment = comment_for(spec);
    out.table.header = {"k", "F_k"};
    for (std::size_t i = 0; i < field.size(); ++i) {
        const std::int64_t k = field.k_min + static_cast<std::int64_t>(i);
        if (!parity_occupied(k, spec.init.site, field.t)) continue;
        out.table.rows.push_back({format_int(k), format_real(field.F[i])});
    }

    nlohmann::ordered_json side;
    side["run"] = spec.describe();
    side["t"] = field.t;
    side["variance"] = variance(field);
    side["participation"] = participation_number(field);
    side["exponential_fit"] = fit_json(localization_length_fit(field));
    if (spec.q) {
        const auto report = resonance_peaks(field, *spec.q);
        nlohmann::ordered_json peaks = nlohmann::ordered_json::array();
        for (const auto& p : report.peaks) {
            peaks.push_back({{"k", p.k}, {"F", p.probability}});
        }
        side["resonance"] = {{"q", report.q}, {"checked", report.checked}, {"aligned", report.aligned},
                             {"peaks", std::move(peaks)}};
    }
    out.sidecars.emplace_back(".fit.json", side.dump(2) + "\n");
    return out;
}

RunOutput run_variance_scan(const RunSpec& spec) {
    spec.validate();
    RunOutput out;
    out.table.comment = comment_for(spec);
    out.table.header = {"omega", "gamma", "r_squared"};
    for (const auto& o : spec.omegas) {
        const ObservableSeries series =
            o.kind == OmegaSpec::Kind::Markov ? run_chain(spec, spec.stride) : run_coherent(spec, o.value, spec.stride).series;
        const FitResult fit = growth_exponent_fit(series, spec.fit_t_min, fit_max(spec));
        out.table.rows.push_back({o.text, format_real(fit.slope), format_real(fit.r_squared)});
    }
    return out;
}

RunOutput run_near_resonance_scan(const RunSpec& spec) {
    spec.validate();
    RunOutput out;
    out.table.comment = comment_for(spec);
    out.table.header = {"delta", "localization_length", "participation", "variance_at_t"};
    for (double d : spec.deltas) {
        const auto run = run_coherent(spec, spec.omega->value.plus(d), spec.steps);
        const ProbabilityField field = distribution(run.state);
        double ell = std::nan("");
        try {
            ell = localization_length_fit(field).derived;
        } catch (const FitError&) {
            // Reported as nan; the participation column still characterizes the row.
        }
        out.table.rows.push_back(
            {format_real(d), format_real(ell), format_real(participation_number(field)), format_real(variance(field))});
    }
    return out;
}

RunOutput run_anderson_check(const RunSpec& spec) {
    spec.validate();
    RunOutput out;
    out.table.comment = comment_for(spec);
    out.table.header = {"w", "recursion_residual", "second_order_residual", "anderson_residual", "degenerate_flag"};

    std::vector<double> grid = spec.w_list;
    if (grid.empty()) {
        for (std::int64_t j = 0; j < spec.w_count; ++j) {
            grid.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.w_count));
        }
    }

    std::vector<std::string> findings;
    const Omega& omega = spec.omega->value;
    for (double wv : grid) {
        const QuasiEnergy w(wv);
        try {
            const auto pair = floquet_recursion(omega, w, spec.seed_a, spec.seed_b, spec.k_lo, spec.k_hi);
            const auto coeffs = coefficients(omega, w, spec.k_lo, spec.k_hi);
            const auto tp = transform(pair, coeffs);
            const auto ra = second_order_residual(tp.alpha, coeffs, Component::Alpha);
            const auto rb = second_order_residual(tp.beta, coeffs, Component::Beta);
            const auto banded = anderson_residual(tp.alpha, coeffs);
            const double second_order = std::max(ra.max, rb.max);
            const bool degenerate = coeffs.degenerate || banded.degenerate;

            if (!(pair.max_residual < kRecursionThreshold)) {
                findings.push_back("w=" + format_real(wv) + " recursion residual " + format_real(pair.max_residual) +
                                   " exceeds " + format_real(kRecursionThreshold));
            }
            if (!(second_order < kSecondOrderThreshold)) {
                findings.push_back("w=" + format_real(wv) + " second-order residual " + format_real(second_order) + " (alpha " +
                                   format_real(ra.max) + ", beta " + format_real(rb.max) + ") exceeds " +
                                   format_real(kSecondOrderThreshold));
            }
            if (!degenerate && !(banded.max < kAndersonThreshold)) {
                findings.push_back("w=" + format_real(wv) + " anderson residual " + format_real(banded.max) +
                                   " (median " + format_real(banded.median) + ") exceeds " +
                                   format_real(kAndersonThreshold));
            }
            out.table.rows.push_back({format_real(wv), format_real(pair.max_residual), format_real(second_order),
                                      format_real(banded.max), degenerate ? "1" : "0"});
        } catch (const NumericError& e) {
            out.had_errors = true;
            findings.push_back("w=" + format_real(wv) + " failed: " + e.what());
            out.table.rows.push_back({format_real(wv), "nan", "nan", "nan", "failed"});
        }
    }
    if (!findings.empty()) {
        std::string report = "# " + spec.describe() + "\n";
        for (const auto& f : findings) report += f + "\n";
        out.sidecars.emplace_back(".discrepancies.txt", std::move(report));
    }
    return out;
}

RunOutput run_kinetic_stats(const RunSpec& spec) {
    spec.validate();
    const auto stats = kinetic_statistics(spec.omega->value, QuasiEnergy(spec.w), spec.n_sites, spec.k_first);
    RunOutput out;
    out.table.comment = comment_for(spec);
    out.table.header = {"k", "T_k"};
    for (std::size_t i = 0; i < stats.T.size(); ++i) {
        out.table.rows.push_back({format_int(stats.k_first + static_cast<std::int64_t>(i)), format_real(stats.T[i])});
    }

    nlohmann::ordered_json side;
    side["run"] = spec.describe();
    side["n_sites"] = stats.T.size();
    side["degenerate"] = stats.degenerate;
    side["min"] = stats.min;
    side["max"] = stats.max;
    side["range"] = stats.range();
    side["q1"] = stats.q1;
    side["median"] = stats.median;
    side["q3"] = stats.q3;
    side["iqr"] = stats.iqr();
    side["lag1_autocorrelation"] = std::isnan(stats.lag1) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(stats.lag1);
    side["narrowly_peaked"] = stats.narrowly_peaked();
    side["pseudo_random"] = stats.pseudo_random();
    const double scale = std::max(std::abs(stats.min), std::abs(stats.max));
    const auto period = smallest_period(stats.T, 64, 1e-9 * std::max(scale, 1.0));
    side["period"] = period ? nlohmann::ordered_json(*period) : nlohmann::ordered_json(nullptr);
    side["histogram"] = {{"edges", stats.bin_edges}, {"counts", stats.counts}};
    out.sidecars.emplace_back(".stats.json", side.dump(2) + "\n");
    return out;
}

RunOutput run(const RunSpec& spec) {
    switch (spec.experiment) {
        case Experiment::Evolve: return run_evolve(spec);
        case Experiment::Distribution: return run_distribution(spec);
        case Experiment::VarianceScan: return run_variance_scan(spec);
        case Experiment::NearResonanceScan: return run_near_resonance_scan(spec);
        case Experiment::AndersonCheck: return run_anderson_check(spec);
        case Experiment::KineticStats: return run_kinetic_stats(spec);
    }
    throw ConfigurationError("unknown experiment");
}

void write_output(const RunOutput& output, const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<std::pair<fs::path, std::string>> files;
    files.emplace_back(fs::path(path), output.table.str());
    for (const auto& [suffix, content] : output.sidecars) files.emplace_back(fs::path(path + suffix), content);

    std::vector<fs::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& [target, content] : files) {
        fs::path tmp = target;
        tmp += ".tmp";
        temps.push_back(tmp);
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os << content;
        os.close();
        if (!os) {
            cleanup();
            throw ConfigurationError("cannot write " + target.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        fs::rename(temps[i], files[i].first, ec);
        if (ec) {
            cleanup();
            throw ConfigurationError("cannot move output into place: " + files[i].first.string());
        }
    }
}

}  // namespace qwalk
