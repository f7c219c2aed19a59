#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riselect/ranking.hpp"
#include "riselect/selection.hpp"
#include "riselect/simgen.hpp"
#include "riselect/types.hpp"

namespace riselect {

/// One measurement destined for records.csv.
struct MetricRecord {
    std::string design_id;
    int example = 0;
    std::string setting;
    double rho = 0.0;
    double snr = 0.0;
    int replication = 0;
    std::string method;
    std::string metric;
    int k = -1;  // -1 prints as an empty field
    double value = 0.0;
};

/// Path entry chosen by external-validation tuning.
struct TunedFit {
    std::string method;
    std::map<std::string, double> chosen_hyper;
    CoefficientVector coefficients;  // standardized-fit space
    double validation_mse = 0.0;
};

/// Smallest k whose top-k ranked set covers the whole true support.
int metric_s(const RankingResult& ranking, const std::vector<int>& true_support);

/// Fraction of the true support found in the top-k ranked set.
double metric_pr_k(const RankingResult& ranking, const std::vector<int>& true_support, int k);

/// Harmonic mean of support precision and recall. Both supports empty
/// counts as 1; an empty estimate against a nonempty truth is 0.
double metric_f1(const CoefficientVector& estimate, const CoefficientVector& truth);

/// (b - b0)' Sigma (b - b0) / sigma2, on the original predictor scale.
double metric_rte(const CoefficientVector& estimate, const CoefficientVector& truth,
                  const Matrix& sigma, double sigma2);

/// Original-scale slopes of a standardized fit: w_j = scale_y * b_j / scale_x_j.
CoefficientVector to_original_scale(const CoefficientVector& standardized, const Dataset& train);

/// Intercept of the original-scale model.
double original_intercept(const CoefficientVector& original_slopes, const Dataset& train);

/// Mean squared prediction error of a standardized fit on raw data,
/// predicting through the training standardization mapping.
double prediction_mse(const CoefficientVector& standardized, const Dataset& train,
                      const RawData& data);

/// Picks the path entry with minimal validation MSE; ties prefer the
/// smaller active set, then smaller lambda, then smaller gamma.
TunedFit tune_on_validation(const FitSequence& seq, const RawData& validation,
                            const Dataset& train_standardization);

/// One point of an effective-degrees-of-freedom curve.
struct EdfPoint {
    int k = 0;               // model size, or lambda index for the lasso
    double edf = 0.0;
    double se = 0.0;         // block (batch-means) standard error
    double expected_size = 0.0;
};

struct EdfCurve {
    std::string method;
    std::vector<EdfPoint> points;
};

struct EdfOptions {
    int n_blocks = 10;
    int n_lambda = kDefaultLassoPathLength;
    double lambda_min_ratio = 0.0;  // <= 0: default for (n, p)
    int bs_max_p = kBestSubsetMaxPredictors;
};

/// Monte-Carlo EDF over repeated noise draws with X held fixed:
/// sigma^{-2} sum_i cov(y_i, yhat_i). Fits skip centering so the size-0
/// model predicts exactly zero. For sized methods the curve is indexed by
/// the entries of `sizes`; for the lasso, by the lambda grid, with
/// expected_size the mean support size.
EdfCurve edf_curve(const MaterializedDesign& md, const std::string& method,
                   const std::vector<int>& sizes, int n_draws, const RngStream& stream,
                   const EdfOptions& options = {});

/// MetricRecord rows (metrics "edf", "edf_se", "esize") for one method.
std::vector<MetricRecord> edf_monte_carlo(const SimDesign& design, const std::string& method,
                                          const std::vector<int>& sizes, int n_draws,
                                          const RngStream& stream, const EdfOptions& options = {});

/// Linear interpolation of an EDF curve at a target expected size.
std::optional<double> edf_at_expected_size(const EdfCurve& curve, double target_size);

}  // namespace riselect
