#include "snrlab/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "snrlab/stats.hpp"

namespace snrlab {

std::string_view tuning_mode_name(TuningMode m) {
    switch (m) {
        case TuningMode::PaperFormula: return "paper";
        case TuningMode::OracleGrid: return "oracle";
        case TuningMode::UserFixed: return "fixed";
    }
    return "unknown";
}

std::optional<TuningMode> parse_tuning_mode(std::string_view name) {
    for (TuningMode m : {TuningMode::PaperFormula, TuningMode::OracleGrid, TuningMode::UserFixed})
        if (tuning_mode_name(m) == name) return m;
    return std::nullopt;
}

std::string_view record_status_name(RecordStatus s) {
    switch (s) {
        case RecordStatus::Ok: return "ok";
        case RecordStatus::Failed: return "failed";
        case RecordStatus::Uncertified: return "uncertified";
    }
    return "unknown";
}

std::size_t SweepConfig::pilot_count() const { return pilot_trials ? pilot_trials : (trials + 3) / 4; }

void SweepConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
    if (n == 0 || p == 0 || k == 0) fail("n, p and k must be >= 1");
    if (k > p) fail("k must be <= p");
    if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be > 0");
    if (inv_snr.empty()) fail("inv_snr grid is empty");
    for (std::size_t i = 0; i < inv_snr.size(); ++i) {
        if (!(inv_snr[i] >= 0.0) || !std::isfinite(inv_snr[i])) fail("inv_snr values must be finite and >= 0");
        if (i > 0 && !(inv_snr[i] > inv_snr[i - 1])) fail("inv_snr grid must be strictly ascending");
    }
    if (trials == 0) fail("trials must be >= 1");
    if (estimators.empty()) fail("estimators is empty");
    for (std::size_t i = 0; i < estimators.size(); ++i)
        for (std::size_t j = i + 1; j < estimators.size(); ++j)
            if (estimators[i] == estimators[j]) fail("estimator listed twice");
    if (tuning == TuningMode::OracleGrid) {
        if (grid_points < 2) fail("grid_points must be >= 2");
        if (inv_snr.front() == 0.0) fail("oracle tuning needs inv_snr > 0");
    }
    auto positive_list = [&](const std::vector<double>& g, const char* name, bool allow_zero) {
        for (double v : g)
            if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0))
                fail(std::string(name) + " entries must be finite and " + (allow_zero ? ">= 0" : "> 0"));
    };
    positive_list(ridge_grid, "ridge_grid", false);
    positive_list(lasso_grid, "lasso_grid", false);
    positive_list(enet_threshold_grid, "enet_threshold_grid", true);
    positive_list(enet_shrink_grid, "enet_shrink_grid", false);
    if (ridge_lambda && !(*ridge_lambda >= 0.0)) fail("ridge_lambda must be >= 0");
    if (lasso_lambda && !(*lasso_lambda > 0.0)) fail("lasso_lambda must be > 0");
    if (enet_lambda && !(*enet_lambda >= 0.0)) fail("enet_lambda must be >= 0");
    if (enet_gamma && !(1.0 + *enet_gamma > 0.0)) fail("enet_gamma must exceed -1");
    const std::size_t kk = bss_k.value_or(k);
    if (std::find(estimators.begin(), estimators.end(), Family::BestSubset) != estimators.end()) {
        if (kk == 0 || kk > std::min(n, p)) fail("best subset needs 1 <= bss_k <= min(n, p)");
    }
    if (bss_budget == 0) fail("bss_budget must be >= 1");
    if (!(lasso_tol > 0.0)) fail("lasso_tol must be > 0");
    if (lasso_max_iter == 0) fail("lasso_max_iter must be >= 1");
}

std::uint64_t trial_stream_id(double inv_snr, std::size_t trial_id, TrialPhase phase) {
    const std::uint64_t snr_key = mix64(std::bit_cast<std::uint64_t>(inv_snr) ^ 0x5bd1e9955bd1e995ULL);
    const std::uint64_t trial_key = mix64((static_cast<std::uint64_t>(trial_id) << 1) | static_cast<std::uint64_t>(phase));
    return mix64(snr_key ^ (trial_key + 0x9e3779b97f4a7c15ULL));
}

Dataset trial_dataset(const SweepConfig& config, double inv_snr, std::size_t trial_id, TrialPhase phase) {
    const ParamSpace space(config.k, config.tau, config.tau * inv_snr);
    const RngStream rng(config.master_seed, trial_stream_id(inv_snr, trial_id, phase));
    return gen_dataset(config.n, config.p, space, rng, config.random_signs);
}

namespace {

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

FitOptions fit_options(const SweepConfig& c) {
    FitOptions o;
    o.lasso.tol = c.lasso_tol;
    o.lasso.max_iter = c.lasso_max_iter;
    o.bss_mode = BssMode::BranchAndBound;
    o.bss_budget = c.bss_budget;
    return o;
}

double lasso_base(const SweepConfig& c, double sigma) {
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(c.p) / static_cast<double>(c.k)));
}

// Noise level of the entries of X'y off the support.
double correlation_noise(const SweepConfig& c, double sigma) {
    return std::sqrt(sigma * sigma + static_cast<double>(c.k) * c.tau * c.tau / static_cast<double>(c.n));
}

Tuning paper_tuning(const SweepConfig& c, Family f, double inv_snr) {
    const ParamSpace space(c.k, c.tau, c.tau * inv_snr);
    switch (f) {
        case Family::Ridge: return ridge_default_lambda(c.p, space);
        case Family::Lasso: return lasso_default_lambda(c.p, c.k, space.sigma);
        case Family::ElasticNet: return enet_default_tuning(c.p, space);
        case Family::BestSubset: {
            Tuning t;
            t.family = f;
            t.k = c.bss_k.value_or(c.k);
            t.provenance = c.bss_k ? Provenance::UserFixed : Provenance::PaperFormula;
            return t;
        }
        case Family::Zero: {
            Tuning t;
            t.family = f;
            t.provenance = Provenance::PaperFormula;
            return t;
        }
    }
    throw std::logic_error("paper_tuning: unknown family");
}

Tuning fixed_tuning(const SweepConfig& c, Family f, double inv_snr) {
    Tuning t = paper_tuning(c, f, inv_snr);
    auto set = [&](const std::optional<double>& v, double& slot) {
        if (v) {
            slot = *v;
            t.provenance = Provenance::UserFixed;
        }
    };
    if (f == Family::Ridge) set(c.ridge_lambda, t.lambda);
    if (f == Family::Lasso) set(c.lasso_lambda, t.lambda);
    return t;
}

Tuning fixed_enet(const SweepConfig& c, double inv_snr) {
    if (c.enet_lambda && c.enet_gamma) {
        Tuning t;
        t.family = Family::ElasticNet;
        t.lambda = *c.enet_lambda;
        t.gamma = *c.enet_gamma;
        t.provenance = Provenance::UserFixed;
        return t;
    }
    Tuning t = paper_tuning(c, Family::ElasticNet, inv_snr);
    if (c.enet_lambda) t.lambda = *c.enet_lambda;
    if (c.enet_gamma) t.gamma = *c.enet_gamma;
    return t;
}

bool needs_oracle(Family f) { return f == Family::Ridge || f == Family::Lasso || f == Family::ElasticNet; }

}  // namespace

std::vector<Tuning> tuning_grid(const SweepConfig& c, Family family, double inv_snr) {
    const double sigma = c.tau * inv_snr;
    std::vector<Tuning> grid;
    auto make = [&](double lambda, double gamma) {
        Tuning t;
        t.family = family;
        t.lambda = lambda;
        t.gamma = gamma;
        t.provenance = Provenance::OracleGrid;
        grid.push_back(t);
    };
    switch (family) {
        case Family::Ridge: {
            const double base = static_cast<double>(c.p) * sigma * sigma /
                                (static_cast<double>(c.k) * c.tau * c.tau);
            const auto mult = c.ridge_grid.empty() ? logspace(-2.0, 2.0, c.grid_points) : c.ridge_grid;
            for (double m : mult) make(base * m, 0.0);
            break;
        }
        case Family::Lasso: {
            const double base = lasso_base(c, sigma);
            const auto mult = c.lasso_grid.empty() ? logspace(-1.0, 1.0, c.grid_points) : c.lasso_grid;
            for (double m : mult) make(base * m, 0.0);
            break;
        }
        case Family::ElasticNet: {
            const double unit = correlation_noise(c, sigma);
            std::vector<double> thresholds = c.enet_threshold_grid;
            if (thresholds.empty()) {
                thresholds = logspace(-1.5, 0.7, c.grid_points - 1);
                thresholds.insert(thresholds.begin(), 0.0);
            }
            const auto shrink = c.enet_shrink_grid.empty() ? logspace(-0.3, 3.5, c.grid_points) : c.enet_shrink_grid;
            for (double t : thresholds)
                for (double s : shrink) make(2.0 * unit * t, s - 1.0);
            break;
        }
        default:
            break;
    }
    std::stable_sort(grid.begin(), grid.end(), [](const Tuning& a, const Tuning& b) {
        return a.lambda < b.lambda || (a.lambda == b.lambda && a.gamma < b.gamma);
    });
    return grid;
}

TuningTable select_tunings(const SweepConfig& config, double inv_snr) {
    TuningTable table;
    std::vector<Dataset> pilot;
    for (Family f : config.estimators) {
        try {
            if (config.tuning == TuningMode::OracleGrid && needs_oracle(f)) {
                if (pilot.empty()) {
                    pilot.resize(config.pilot_count());
                    const auto count = static_cast<std::int64_t>(pilot.size());
#pragma omp parallel for schedule(dynamic)
                    for (std::int64_t t = 0; t < count; ++t)
                        pilot[static_cast<std::size_t>(t)] =
                            trial_dataset(config, inv_snr, static_cast<std::size_t>(t), TrialPhase::Pilot);
                }
                const auto grid = tuning_grid(config, f, inv_snr);
                table[f] = oracle_tune(f, pilot, grid, fit_options(config));
            } else if (config.tuning == TuningMode::UserFixed) {
                table[f] = f == Family::ElasticNet ? fixed_enet(config, inv_snr) : fixed_tuning(config, f, inv_snr);
            } else {
                table[f] = paper_tuning(config, f, inv_snr);
            }
        } catch (const std::exception&) {
            // Left out of the table; run_trial records the failure per trial.
        }
    }
    return table;
}

std::vector<TrialRecord> run_trial(const SweepConfig& config, double inv_snr, std::size_t trial_id,
                                   const TuningTable* tunings) {
    TuningTable own;
    if (!tunings) {
        own = select_tunings(config, inv_snr);
        tunings = &own;
    }
    const Dataset d = trial_dataset(config, inv_snr, trial_id, TrialPhase::Evaluation);
    const FitOptions options = fit_options(config);
    const double norm2 = d.beta.squared_norm();

    std::vector<TrialRecord> out;
    for (Family f : config.estimators) {
        TrialRecord r;
        r.estimator = f;
        r.inv_snr = inv_snr;
        r.trial_id = trial_id;
        r.beta_zero = norm2 == 0.0;
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto it = tunings->find(f);
            if (it == tunings->end()) {
                if (config.tuning == TuningMode::OracleGrid && needs_oracle(f))
                    throw std::runtime_error("oracle tuning failed on every grid point");
                // Recompute to surface the formula's own error message.
                (void)paper_tuning(config, f, inv_snr);
                throw std::runtime_error("no tuning available");
            }
            r.tuning = it->second;
            const Estimate e = fit(d.X, d.y, r.tuning, options);
            r.unscaled_mse = (e.coefficients - d.beta.dense()).squaredNorm();
            r.scaled_mse = r.beta_zero ? r.unscaled_mse : r.unscaled_mse / norm2;
            if (!std::isfinite(r.scaled_mse)) {
                r.status = RecordStatus::Failed;
                r.message = "non-finite loss";
            } else if (f == Family::BestSubset && e.certificate == Certificate::HeuristicOnly) {
                r.status = RecordStatus::Uncertified;
                r.message = "branch and bound node budget exhausted";
            } else if (!e.converged) {
                r.message = "solver did not converge";
            }
        } catch (const std::exception& ex) {
            r.status = RecordStatus::Failed;
            r.message = ex.what();
        }
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SweepCell> aggregate(const std::vector<TrialRecord>& records) {
    std::map<std::pair<std::string, double>, std::vector<const TrialRecord*>> groups;
    for (const TrialRecord& r : records)
        groups[{std::string(family_name(r.estimator)), r.inv_snr}].push_back(&r);

    std::vector<SweepCell> cells;
    for (auto& [key, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](const TrialRecord* a, const TrialRecord* b) { return a->trial_id < b->trial_id; });
        SweepCell c;
        c.estimator = group.front()->estimator;
        c.inv_snr = key.second;
        std::vector<double> scaled, unscaled;
        for (const TrialRecord* r : group) {
            if (r->status != RecordStatus::Ok) {
                ++c.excluded;
                continue;
            }
            scaled.push_back(r->scaled_mse);
            unscaled.push_back(r->unscaled_mse);
        }
        const MeanSe s = mean_se(scaled);
        const MeanSe u = mean_se(unscaled);
        c.mean_scaled_mse = s.mean;
        c.se_scaled_mse = s.se;
        c.mean_unscaled_mse = u.mean;
        c.se_unscaled_mse = u.se;
        c.trials = s.count;
        c.se_defined = s.count >= 2;
        cells.push_back(c);
    }
    return cells;
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();

    // Pilot and evaluation datasets must never share a stream.
    std::unordered_set<std::uint64_t> ids;
    std::size_t expected = 0;
    for (double inv : config.inv_snr) {
        for (std::size_t t = 0; t < config.trials; ++t) ids.insert(trial_stream_id(inv, t, TrialPhase::Evaluation));
        expected += config.trials;
        if (config.tuning == TuningMode::OracleGrid) {
            for (std::size_t t = 0; t < config.pilot_count(); ++t) ids.insert(trial_stream_id(inv, t, TrialPhase::Pilot));
            expected += config.pilot_count();
        }
    }
    if (ids.size() != expected) throw std::logic_error("run_sweep: stream id collision");

    SweepResult result;
    result.config = config;
    for (double inv : config.inv_snr) result.tunings[inv] = select_tunings(config, inv);

    const std::size_t jobs = config.inv_snr.size() * config.trials;
    std::vector<std::vector<TrialRecord>> per_job(jobs);
    const auto count = static_cast<std::int64_t>(jobs);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < count; ++j) {
        const auto job = static_cast<std::size_t>(j);
        const double inv = config.inv_snr[job / config.trials];
        per_job[job] = run_trial(config, inv, job % config.trials, &result.tunings.at(inv));
    }
    for (auto& recs : per_job)
        for (auto& r : recs) result.records.push_back(std::move(r));

    result.cells = aggregate(result.records);
    for (SweepCell& c : result.cells) {
        const auto& table = result.tunings.at(c.inv_snr);
        const auto it = table.find(c.estimator);
        if (it != table.end()) c.tuning = it->second;
    }
    return result;
}

const SweepCell* find_cell(const SweepResult& result, Family f, double inv_snr) {
    for (const SweepCell& c : result.cells)
        if (c.estimator == f && c.inv_snr == inv_snr) return &c;
    return nullptr;
}

std::vector<TheoryRow> compare_theory(const SweepResult& result) {
    const SweepConfig& c = result.config;
    const double energy = static_cast<double>(c.k) * c.tau * c.tau;
    std::vector<TheoryRow> rows;
    for (const SweepCell& cell : result.cells) {
        TheoryRow r;
        r.estimator = cell.estimator;
        r.inv_snr = cell.inv_snr;
        r.empirical = cell.mean_unscaled_mse / energy;
        const double nan = std::nan("");
        r.first_order = r.ridge_second = r.enet_lower = r.enet_upper = r.ratio = nan;
        if (cell.inv_snr > 0.0 && c.p > c.k) {
            const ParamSpace space(c.k, c.tau, c.tau * cell.inv_snr);
            const SnrRegime regime = classify_regime(c.p, space);
            r.regime = regime.label;
            r.first_order = minimax_first_order(c.p, space, regime) / energy;
            const FormulaValue ridge = ridge_second_order_risk(c.p, space);
            const EnetBounds enet = enet_second_order_bounds(c.p, space);
            r.ridge_second = ridge.value / energy;
            r.enet_lower = enet.lower.value / energy;
            r.enet_upper = enet.upper.value / energy;
            double reference = r.first_order;
            r.reference = regime.label == RegimeLabel::High ? RiskFormula::FirstOrderIII
                          : regime.label == RegimeLabel::Medium ? RiskFormula::FirstOrderII
                                                                : RiskFormula::FirstOrderI;
            if (cell.estimator == Family::Ridge) {
                reference = r.ridge_second;
                r.reference = RiskFormula::RidgeSecondOrder;
                r.reference_valid = ridge.valid;
            } else if (cell.estimator == Family::ElasticNet) {
                reference = r.enet_upper;
                r.reference = RiskFormula::EnetUpper;
                r.reference_valid = enet.upper.valid;
            } else if (cell.estimator == Family::Zero) {
                reference = 1.0;
                r.reference = RiskFormula::ZeroEstimator;
            }
            r.ratio = r.empirical / reference;
        } else if (cell.estimator == Family::Zero) {
            r.reference = RiskFormula::ZeroEstimator;
            r.ratio = r.empirical;
        }
        rows.push_back(r);
    }
    return rows;
}

std::string format_theory_report(const std::vector<TheoryRow>& rows) {
    std::ostringstream os;
    char line[512];
    std::snprintf(line, sizeof line, "%-12s %9s %-7s %11s %11s %11s %11s %11s %-20s %9s\n", "estimator", "inv_snr",
                  "regime", "empirical", "first", "ridge2", "enet_lo", "enet_hi", "reference", "ratio");
    os << line;
    for (const TheoryRow& r : rows) {
        std::snprintf(line, sizeof line, "%-12s %9.4g %-7s %11.5g %11.5g %11.5g %11.5g %11.5g %-20s %9.4f%s\n",
                      std::string(family_name(r.estimator)).c_str(), r.inv_snr,
                      std::string(regime_name(r.regime)).c_str(), r.empirical, r.first_order, r.ridge_second,
                      r.enet_lower, r.enet_upper, std::string(formula_name(r.reference)).c_str(), r.ratio,
                      r.reference_valid ? "" : " (formula outside validity)");
        os << line;
    }
    return os.str();
}

}  // namespace snrlab
