#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riselect/evaluation.hpp"
#include "riselect/simgen.hpp"

namespace riselect {

/// Everything a reproducible run needs. Zeroed numeric fields mean
/// "use the per-part/per-setting default"; resolve_config() fills them in.
struct ExperimentConfig {
    std::string part;                // part1 | part2 | edf
    std::string setting = "low";
    std::vector<int> examples;
    std::vector<double> rho_list;
    std::vector<double> snr_list;
    std::vector<std::string> methods;
    int replications = 0;
    std::uint64_t base_seed = 1;
    int k_max = 0;
    int ridge_lambda_count = 0;
    double ridge_lambda_min = 1e-4;
    double ridge_lambda_max = 1e3;
    int lasso_n_lambda = kDefaultLassoPathLength;
    double lasso_lambda_min_ratio = 0.0;  // 0: choose by (n, p)
    int n_gamma = kDefaultGammaCount;
    int gd_max_p = kGdMaxPredictors;
    // EDF study shape (the defaults reproduce the reference complexity plot)
    int edf_n = 70;
    int edf_p = 30;
    int edf_s = 5;
    int edf_example = 4;
    double edf_rho = 0.35;
    double edf_snr = 0.7;
    int edf_n_draws = 500;
    std::vector<int> edf_sizes;
    int edf_bs_k_max = 6;
    std::string output_dir;

    bool operator==(const ExperimentConfig&) const = default;
};

struct AggregateRecord {
    std::string design_id;
    int example = 0;
    std::string setting;
    double rho = 0.0;
    double snr = 0.0;
    std::string method;
    std::string metric;
    int k = -1;
    double mean = 0.0;
    double stderr_mean = 0.0;
    int n = 0;
};

struct ResultTable {
    std::vector<MetricRecord> rows;        // canonical order
    std::vector<AggregateRecord> aggregates;
};

/// Registered method labels ("car" normalizes to "criz" on resolve).
bool is_ranking_method(const std::string& label);
bool is_selection_method(const std::string& label);
bool is_edf_method(const std::string& label);

/// Fills defaults and validates; throws ConfigError on any problem so
/// runs never fail halfway.
ExperimentConfig resolve_config(const ExperimentConfig& config);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);

/// Per-(design, method, metric, k) mean and standard error.
std::vector<AggregateRecord> aggregate_rows(const std::vector<MetricRecord>& rows);

/// Canonical row order: (design_id, rep, method, metric, k).
void sort_rows(std::vector<MetricRecord>& rows);

ResultTable run_part1(const ExperimentConfig& config);
ResultTable run_part2(const ExperimentConfig& config);
ResultTable run_edf(const ExperimentConfig& config);
ResultTable run(const ExperimentConfig& config);

/// Tuning path for one selection method; rankings are computed at most
/// once per underlying measure via ranking_cache.
FitSequence fit_sequence(const std::string& method, const Dataset& ds,
                         const ExperimentConfig& config,
                         std::map<std::string, RankingResult>& ranking_cache);

/// Writes records.csv, aggregates.csv and config.json into dir.
void emit(const ResultTable& table, const ExperimentConfig& resolved_config,
          const std::string& dir);

std::string records_csv(const ResultTable& table);
std::string aggregates_csv(const ResultTable& table);

/// Stream for replication rep (1-based) of a design.
RngStream replication_stream(std::uint64_t base_seed, const std::string& design_id, int rep);

}  // namespace riselect
