// qwalk: datasets and Floquet/Anderson checks for the momentum-space walk.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/experiments.hpp"

namespace {

struct Flags {
    std::string omega_ratio;
    std::string omega_dec;
    std::string two_pi_omega;
    std::string delta;
    std::string omegas;
    std::string init;
    std::string w_list;
    std::string seed;
    std::int64_t half_width = 0;
};

void add_walk_flags(CLI::App* sub, qwalk::RunSpec& spec, Flags& flags) {
    auto* o1 = sub->add_option("--omega", flags.omega_ratio, "Omega as an exact ratio p/q");
    auto* o2 = sub->add_option("--omega-dec", flags.omega_dec, "Omega as a decimal");
    auto* o3 = sub->add_option("--two-pi-omega", flags.two_pi_omega, "2*pi*Omega as a decimal");
    o1->excludes(o2)->excludes(o3);
    o2->excludes(o3);
    sub->add_option("--delta", flags.delta, "offset(s) added to a rational Omega, comma separated");
    sub->add_option("--steps", spec.steps, "number of steps")->capture_default_str();
    sub->add_option("--half-width", flags.half_width, "lattice half-width K (default steps + |k0| + 64)");
    sub->add_option("--init", flags.init, "initial state cL_re,cL_im,cR_re,cR_im@k0");
    sub->add_option("--stride", spec.stride, "record every n steps")->capture_default_str();
}

void apply_omega(qwalk::RunSpec& spec, const Flags& flags) {
    if (!flags.omega_ratio.empty()) spec.omega = qwalk::parse_ratio(flags.omega_ratio);
    if (!flags.omega_dec.empty()) spec.omega = qwalk::parse_decimal(flags.omega_dec);
    if (!flags.two_pi_omega.empty()) spec.omega = qwalk::parse_two_pi(flags.two_pi_omega);
}

void apply_common(qwalk::RunSpec& spec, const Flags& flags) {
    apply_omega(spec, flags);
    if (!flags.delta.empty()) spec.deltas = qwalk::parse_real_list(flags.delta);
    if (flags.half_width != 0) spec.half_width = flags.half_width;
    if (!flags.init.empty()) {
        spec.init = qwalk::parse_init(flags.init);
        spec.init_text = flags.init;
    }
    if (!flags.omegas.empty()) {
        std::string_view rest = flags.omegas;
        while (true) {
            const auto pos = rest.find(',');
            spec.omegas.push_back(qwalk::parse_omega_token(rest.substr(0, pos)));
            if (pos == std::string_view::npos) break;
            rest.remove_prefix(pos + 1);
        }
    }
    if (!flags.w_list.empty()) spec.w_list = qwalk::parse_real_list(flags.w_list);
    if (!flags.seed.empty()) {
        const auto v = qwalk::parse_real_list(flags.seed);
        if (v.size() != 4) throw qwalk::ConfigurationError("--seed expects a_re,a_im,b_re,b_im");
        spec.seed_a = {v[0], v[1]};
        spec.seed_b = {v[2], v[3]};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Momentum-space quantum walk with quadratic phase drift"};
    app.require_subcommand(1);

    qwalk::RunSpec spec;
    Flags flags;
    std::string out;

    auto* evolve = app.add_subcommand("evolve", "variance, mean, participation per step");
    add_walk_flags(evolve, spec, flags);
    evolve->add_flag("--markov", spec.markov, "evolve the interference-free chain");
    evolve->add_flag("--markov-baseline", spec.markov_baseline, "add a variance_markov column");

    auto* dist = app.add_subcommand("distribution", "F_k at the final step with exponential fit");
    add_walk_flags(dist, spec, flags);
    dist->add_option("--q", spec.q, "resonance denominator for the peak report");

    auto* vscan = app.add_subcommand("variance-scan", "growth exponent per Omega");
    add_walk_flags(vscan, spec, flags);
    vscan->add_option("--omegas", flags.omegas, "list of p/q | decimal | 2pi:x | markov")->required();
    vscan->add_option("--fit-min", spec.fit_t_min, "growth fit window start")->capture_default_str();
    vscan->add_option("--fit-max", spec.fit_t_max, "growth fit window end (default steps)");

    auto* nscan = app.add_subcommand("near-resonance-scan", "localization versus delta off a rational Omega");
    add_walk_flags(nscan, spec, flags);

    auto* anderson = app.add_subcommand("anderson-check", "Floquet recursion -> second-order -> Anderson residuals");
    add_walk_flags(anderson, spec, flags);
    anderson->add_option("--w-count", spec.w_count, "uniform quasienergy grid size")->capture_default_str();
    anderson->add_option("--w", flags.w_list, "explicit quasienergies, comma separated");
    anderson->add_option("--k-lo", spec.k_lo, "lowest site")->capture_default_str();
    anderson->add_option("--k-hi", spec.k_hi, "highest site")->capture_default_str();
    anderson->add_option("--seed", flags.seed, "a_re,a_im,b_re,b_im at k = 0");

    auto* kinetic = app.add_subcommand("kinetic-stats", "distribution of the on-site term T_k");
    add_walk_flags(kinetic, spec, flags);
    kinetic->add_option("--w", spec.w, "quasienergy")->capture_default_str();
    kinetic->add_option("--sites", spec.n_sites, "number of sites")->capture_default_str();
    kinetic->add_option("--k-first", spec.k_first, "first site")->capture_default_str();

    for (auto* sub : {evolve, dist, vscan, nscan, anderson, kinetic}) {
        sub->add_option("--out", out, "output CSV path")->required();
    }

    CLI11_PARSE(app, argc, argv);

    if (evolve->parsed()) spec.experiment = qwalk::Experiment::Evolve;
    if (dist->parsed()) spec.experiment = qwalk::Experiment::Distribution;
    if (vscan->parsed()) spec.experiment = qwalk::Experiment::VarianceScan;
    if (nscan->parsed()) spec.experiment = qwalk::Experiment::NearResonanceScan;
    if (anderson->parsed()) spec.experiment = qwalk::Experiment::AndersonCheck;
    if (kinetic->parsed()) spec.experiment = qwalk::Experiment::KineticStats;

    std::error_code ec;
    std::filesystem::remove(out + ".discrepancies.txt", ec);
    try {
        apply_common(spec, flags);
        spec.out = out;
        const auto result = qwalk::run(spec);
        qwalk::write_output(result, out);
        if (result.had_errors) {
            std::cerr << "qwalk: some rows failed; see " << out << ".discrepancies.txt\n";
            return 1;
        }
    } catch (const qwalk::Error& e) {
        std::filesystem::remove(out, ec);
        std::cerr << "qwalk: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
