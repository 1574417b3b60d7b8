#pragma once

// Monte Carlo sweeps over 1/SNR, their CSV and SVG outputs, and the flat
// key = value configuration format.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snrlab/estimators.hpp"
#include "snrlab/theory.hpp"

namespace snrlab {

enum class TuningMode { PaperFormula, OracleGrid, UserFixed };

std::string_view tuning_mode_name(TuningMode m);
std::optional<TuningMode> parse_tuning_mode(std::string_view name);

struct SweepConfig {
    std::size_t n = 500;
    std::size_t p = 1000;
    std::size_t k = 25;
    double tau = 1.0;
    std::vector<double> inv_snr{0.2, 1.0, 5.0};   // sigma = tau * inv_snr
    std::size_t trials = 50;
    std::size_t pilot_trials = 0;                  // 0: ceil(trials / 4)
    std::vector<Family> estimators{Family::Ridge, Family::Lasso, Family::ElasticNet};
    TuningMode tuning = TuningMode::OracleGrid;
    std::uint64_t master_seed = 1;
    bool random_signs = false;

    // Oracle grids. Empty means the default of `grid_points` log-spaced values.
    //   ridge_grid:           multiples of p sigma^2 / (k tau^2)
    //   lasso_grid:           multiples of sigma sqrt(2 log(p/k))
    //   enet_threshold_grid:  threshold lambda/2 in units of sqrt(sigma^2 + k tau^2 / n),
    //                         the noise level of X'y off the support (0 allowed)
    //   enet_shrink_grid:     values of 1 + gamma
    std::size_t grid_points = 40;
    std::vector<double> ridge_grid;
    std::vector<double> lasso_grid;
    std::vector<double> enet_threshold_grid;
    std::vector<double> enet_shrink_grid;

    // Fixed tunings (tuning = fixed). Missing entries fall back to the
    // paper formula; bss_k defaults to k in every mode.
    std::optional<double> ridge_lambda;
    std::optional<double> lasso_lambda;
    std::optional<double> enet_lambda;
    std::optional<double> enet_gamma;
    std::optional<std::size_t> bss_k;

    std::uint64_t bss_budget = kDefaultBssNodeBudget;
    double lasso_tol = 1e-7;
    std::size_t lasso_max_iter = 100000;

    /// Throws ConfigError on any violated constraint.
    void validate() const;
    std::size_t pilot_count() const;

    bool operator==(const SweepConfig&) const = default;
};

/// Parses the flat configuration grammar (see README). Errors name the line.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);
/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SweepConfig& config);

enum class RecordStatus { Ok, Failed, Uncertified };
std::string_view record_status_name(RecordStatus s);

struct TrialRecord {
    Family estimator = Family::Zero;
    double inv_snr = 0.0;
    std::size_t trial_id = 0;
    double scaled_mse = 0.0;
    double unscaled_mse = 0.0;
    bool beta_zero = false;    // scaled_mse holds the unscaled loss
    Tuning tuning;
    double wall_time = 0.0;    // seconds
    RecordStatus status = RecordStatus::Ok;
    std::string message;
};

using TuningTable = std::map<Family, Tuning>;

enum class TrialPhase : std::uint64_t { Pilot = 0, Evaluation = 1 };

/// Stream id of one dataset; distinct phases never share ids.
std::uint64_t trial_stream_id(double inv_snr, std::size_t trial_id, TrialPhase phase);

/// Dataset of one (inv_snr, trial, phase).
Dataset trial_dataset(const SweepConfig& config, double inv_snr, std::size_t trial_id, TrialPhase phase);

/// Tunings for one noise level. OracleGrid tunes on the pilot datasets.
TuningTable select_tunings(const SweepConfig& config, double inv_snr);

/// Default oracle grid of a family at one noise level.
std::vector<Tuning> tuning_grid(const SweepConfig& config, Family family, double inv_snr);

/// Fits every enabled estimator on the evaluation dataset `trial_id`.
/// Without `tunings` they are selected with select_tunings first.
std::vector<TrialRecord> run_trial(const SweepConfig& config, double inv_snr, std::size_t trial_id,
                                   const TuningTable* tunings = nullptr);

struct SweepCell {
    Family estimator = Family::Zero;
    double inv_snr = 0.0;
    double mean_scaled_mse = 0.0;
    double se_scaled_mse = 0.0;
    double mean_unscaled_mse = 0.0;
    double se_unscaled_mse = 0.0;
    std::size_t trials = 0;      // records that entered the mean
    std::size_t excluded = 0;    // failed or uncertified records
    bool se_defined = false;
    Tuning tuning;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells;             // sorted by (estimator name, inv_snr)
    std::vector<TrialRecord> records;         // every evaluation record
    std::map<double, TuningTable> tunings;    // by inv_snr
};

/// Deterministic for a given config whatever the OpenMP thread count.
SweepResult run_sweep(const SweepConfig& config);

/// Means and standard errors of the evaluation records, one cell per
/// (estimator, inv_snr) pair.
std::vector<SweepCell> aggregate(const std::vector<TrialRecord>& records);

const SweepCell* find_cell(const SweepResult& result, Family f, double inv_snr);

struct TheoryRow {
    Family estimator = Family::Zero;
    double inv_snr = 0.0;
    RegimeLabel regime = RegimeLabel::Low;
    double empirical = 0.0;       // mean unscaled MSE / (k tau^2)
    double first_order = 0.0;     // all theory columns divided by k tau^2
    double ridge_second = 0.0;
    double enet_lower = 0.0;
    double enet_upper = 0.0;
    RiskFormula reference = RiskFormula::ZeroEstimator;
    double ratio = 0.0;           // empirical / reference formula
    bool reference_valid = true;
};

/// Reference formula: ridge second order for ridge, the elastic net upper
/// bound for enet, k tau^2 for zero, the regime's first-order risk otherwise.
std::vector<TheoryRow> compare_theory(const SweepResult& result);
std::string format_theory_report(const std::vector<TheoryRow>& rows);

// ---- persistence ------------------------------------------------------------

inline constexpr std::string_view kCsvHeader = "estimator,inv_snr,mean_scaled_mse,se_scaled_mse,trials,master_seed";

struct CsvRow {
    std::string estimator;
    double inv_snr = 0.0;
    double mean = 0.0;
    double se = 0.0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
};

/// 17 significant digits in positional notation; exact zero is "0".
std::string format_sig17(double v);
/// Shortest round-trip text, with ".0" appended to integral values.
std::string format_shortest(double v);

std::string format_csv(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);
/// Throws SchemaError naming the offending line.
std::vector<CsvRow> parse_csv(std::string_view text);
std::vector<CsvRow> read_csv(const std::string& path);

struct PlotOptions {
    double y_max = 1.0;
    int width = 720;
    int height = 480;
    std::string title;
    // Dashed theory curves need the problem shape.
    std::optional<std::size_t> p;
    std::optional<std::size_t> k;
    double tau = 1.0;
};

std::string render_svg(const std::vector<CsvRow>& rows, const PlotOptions& options);
void emit_plot(const std::string& csv_path, const std::string& svg_path, const PlotOptions& options = {});

/// Writes `text` to `path`, throwing std::runtime_error with the path on failure.
void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace snrlab
