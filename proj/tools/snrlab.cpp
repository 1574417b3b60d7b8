// snrlab command line: sweeps, theory tables, posterior diagnostics,
// single fits and plots.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "snrlab/bayes.hpp"
#include "snrlab/harness.hpp"
#include "snrlab/stats.hpp"

using namespace snrlab;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    int threads = 0;
    std::string out;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text;
    else
        write_text_file(g.out, text);
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

int run_sweep_cmd(const Globals& g, const std::string& config_path, bool report, const std::string& svg) {
    SweepConfig config = load_config(config_path);
    if (g.seed) config.master_seed = *g.seed;
    if (g.trials) config.trials = *g.trials;
    const SweepResult result = run_sweep(config);
    emit(g, format_csv(result));
    std::size_t excluded = 0;
    for (const SweepCell& c : result.cells) excluded += c.excluded;
    if (excluded) std::cerr << "note: " << excluded << " trial records failed or were uncertified and were excluded\n";
    if (report) std::cerr << format_theory_report(compare_theory(result));
    if (!svg.empty()) {
        PlotOptions o;
        o.p = config.p;
        o.k = config.k;
        o.tau = config.tau;
        write_text_file(svg, render_svg(parse_csv(format_csv(result)), o));
    }
    return 0;
}

int run_theory_cmd(const Globals& g, std::size_t k, std::size_t p, double tau, double sigma) {
    const ParamSpace space(k, tau, sigma);
    if (!(sigma > 0.0)) throw ConfigError("theory: sigma must be > 0");
    const SnrRegime regime = classify_regime(p, space);
    const double energy = static_cast<double>(k) * tau * tau;
    const FormulaValue ridge = ridge_second_order_risk(p, space);
    const EnetBounds enet = enet_second_order_bounds(p, space);
    std::ostringstream os;
    os << fmt("k = %zu, p = %zu, tau = %g, sigma = %g, mu = %g\n", k, p, tau, sigma, space.mu());
    os << fmt("regime: %s (rho = %.6g)\n", std::string(regime_name(regime.label)).c_str(), regime.rho);
    os << fmt("%-22s %16s %14s\n", "formula", "risk", "risk/(k tau^2)");
    auto row = [&](const char* name, double v, bool valid) {
        os << fmt("%-22s %16.8g %14.8g%s\n", name, v, v / energy, valid ? "" : "  (outside validity)");
    };
    row("first-order", minimax_first_order(p, space, regime), true);
    row("ridge-second-order", ridge.value, ridge.valid);
    row("enet-lower", enet.lower.value, enet.lower.valid);
    row("enet-upper", enet.upper.value, enet.upper.valid);
    os << fmt("ridge lambda = %.8g\n", ridge_default_lambda(p, space).lambda);
    os << fmt("lasso lambda = %.8g\n", lasso_default_lambda(p, k, sigma).lambda);
    try {
        const Tuning t = enet_default_tuning(p, space);
        os << fmt("enet lambda = %.8g, gamma = %.8g\n", t.lambda, t.gamma);
    } catch (const RegimeMismatch& e) {
        os << "enet tuning: " << e.what() << "\n";
    }
    emit(g, os.str());
    return 0;
}

int run_bayes_cmd(const Globals& g, std::size_t n, std::size_t m, double mult, std::size_t risk_trials,
                  bool symmetric) {
    const std::size_t trials = g.trials.value_or(200);
    const std::uint64_t seed = g.seed.value_or(1);
    const double lambda = mult * std::sqrt(2.0 * std::log(static_cast<double>(m)));
    const auto diag = spike_diagnostics_mc(n, m, lambda, trials, RngStream(seed, 0xb0));
    std::vector<double> p1, a, logb;
    std::size_t above = 0;
    for (const SpikeTrial& t : diag) {
        p1.push_back(t.p1);
        a.push_back(t.A);
        logb.push_back(t.logB);
        if (t.logB >= std::log(10.0)) ++above;
    }
    const MeanSe a_stats = mean_se(a);
    const BayesRisk risk = bayes_risk_mc({m, lambda, symmetric}, n, risk_trials, RngStream(seed, 0xb1));
    std::ostringstream os;
    os << fmt("n = %zu, m = %zu, lambda = %.6g (%.3g sqrt(2 log m)), trials = %zu\n", n, m, lambda, mult, trials);
    os << fmt("median p1          = %.6g\n", median(p1));
    os << fmt("mean A             = %.6g (se %.3g)\n", a_stats.mean, a_stats.se);
    os << fmt("median log B       = %.6g\n", median(logb));
    os << fmt("log B >= log 10    = %.4g of trials\n", static_cast<double>(above) / static_cast<double>(trials));
    os << fmt("bayes risk         = %.6g (se %.3g), lambda^2 = %.6g, ratio %.4g\n", risk.risk, risk.se,
              lambda * lambda, risk.risk / (lambda * lambda));
    emit(g, os.str());
    return 0;
}

int run_fit_cmd(const Globals& g, std::size_t n, std::size_t p, std::size_t k, double tau, double sigma,
                const std::string& name, std::optional<double> lambda, std::optional<double> gamma) {
    const auto family = parse_family(name);
    if (!family) throw ConfigError("fit: unknown estimator '" + name + "'");
    const ParamSpace space(k, tau, sigma);
    const Dataset d = gen_dataset(n, p, space, RngStream(g.seed.value_or(1), 0));
    Tuning t;
    switch (*family) {
        case Family::Ridge: t = ridge_default_lambda(p, space); break;
        case Family::Lasso: t = lasso_default_lambda(p, k, sigma); break;
        case Family::ElasticNet: t = enet_default_tuning(p, space); break;
        default: t.family = *family; t.k = k; t.provenance = Provenance::PaperFormula;
    }
    if (lambda) t.lambda = *lambda, t.provenance = Provenance::UserFixed;
    if (gamma) t.gamma = *gamma, t.provenance = Provenance::UserFixed;
    const Estimate e = fit(d.X, d.y, t, {});
    std::ostringstream os;
    os << fmt("estimator      %s\n", std::string(family_name(*family)).c_str());
    os << fmt("tuning         lambda = %.8g, gamma = %.8g, k = %zu (%s)\n", t.lambda, t.gamma, t.k,
              std::string(provenance_name(t.provenance)).c_str());
    os << fmt("objective      %.10g\n", e.objective);
    os << fmt("iterations     %zu\n", e.iterations);
    os << fmt("converged      %s\n", e.converged ? "true" : "false");
    os << fmt("kkt_residual   %.3g\n", e.kkt_residual);
    os << fmt("certificate    %s\n", std::string(certificate_name(e.certificate)).c_str());
    os << fmt("nonzeros       %ld\n", static_cast<long>((e.coefficients.array() != 0.0).count()));
    os << fmt("scaled_mse     %.10g\n", scaled_loss(e.coefficients, d.beta));
    emit(g, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snrlab: sparse regression risk across signal-to-noise ratios"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Master seed");
    auto* trials_opt = app.add_option("--trials", trials, "Trial count")->check(CLI::PositiveNumber);
    app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)")
        ->envname("SNRLAB_THREADS")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out", g.out, "Output file (default stdout)");

    std::string config_path, svg_path;
    bool report = false;
    auto* sweep = app.add_subcommand("sweep", "Run a configured sweep and write CSV");
    sweep->add_option("--config", config_path, "Config file")->required();
    sweep->add_flag("--report", report, "Print the theory comparison to stderr");
    sweep->add_option("--svg", svg_path, "Also write an SVG plot");

    std::size_t k = 10, p = 1000, n = 500;
    double tau = 1.0, sigma = 1.0;
    auto* theory = app.add_subcommand("theory", "Risk formulas and regime for (k, p, tau, sigma)");
    theory->add_option("--k", k)->required();
    theory->add_option("--p", p)->required();
    theory->add_option("--tau", tau)->required();
    theory->add_option("--sigma", sigma)->required();

    std::size_t bn = 300, bm = 300, risk_trials = 400;
    double mult = 0.5;
    bool symmetric = false;
    auto* bayes = app.add_subcommand("bayes", "Spike-prior posterior diagnostics");
    bayes->add_option("--n", bn);
    bayes->add_option("--m", bm);
    bayes->add_option("--lambda-mult", mult, "lambda = mult * sqrt(2 log m)");
    bayes->add_option("--risk-trials", risk_trials);
    bayes->add_flag("--symmetric", symmetric);

    std::string estimator = "lasso";
    std::optional<double> lambda, gamma;
    auto* fitc = app.add_subcommand("fit", "Fit one estimator on one generated dataset");
    fitc->add_option("--n", n);
    fitc->add_option("--p", p);
    fitc->add_option("--k", k);
    fitc->add_option("--tau", tau);
    fitc->add_option("--sigma", sigma);
    fitc->add_option("--estimator", estimator);
    fitc->add_option("--lambda", lambda);
    fitc->add_option("--gamma", gamma);

    std::string csv_in, svg_out;
    PlotOptions plot_opts;
    std::size_t plot_p = 0, plot_k = 0;
    auto* plot = app.add_subcommand("plot", "Render a sweep CSV as SVG");
    plot->add_option("csv", csv_in)->required();
    plot->add_option("svg", svg_out)->required();
    plot->add_option("--y-max", plot_opts.y_max);
    plot->add_option("--title", plot_opts.title);
    plot->add_option("--p", plot_p, "Problem p, enables theory overlays");
    plot->add_option("--k", plot_k, "Problem k, enables theory overlays");
    plot->add_option("--tau", plot_opts.tau);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (*seed_opt) g.seed = seed;
    if (*trials_opt) g.trials = trials;
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        if (*sweep) return run_sweep_cmd(g, config_path, report, svg_path);
        if (*theory) return run_theory_cmd(g, k, p, tau, sigma);
        if (*bayes) return run_bayes_cmd(g, bn, bm, mult, risk_trials, symmetric);
        if (*fitc) return run_fit_cmd(g, n, p, k, tau, sigma, estimator, lambda, gamma);
        if (*plot) {
            if (plot_p && plot_k) {
                plot_opts.p = plot_p;
                plot_opts.k = plot_k;
            }
            emit_plot(csv_in, svg_out, plot_opts);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
