#pragma once

#include <map>
#include <string>
#include <vector>

#include "riselect/ranking.hpp"
#include "riselect/types.hpp"

namespace riselect {

/// One fitted model on a tuning path.
struct FitEntry {
    ActiveSet active_set;
    std::map<std::string, double> hyper;  // "k", "lambda", "gamma" as applicable
    CoefficientVector coefficients;       // full length p, zeros off-support
};

/// A tuning path: nested active sets for rankers/stepwise, a lambda path
/// for the lasso, (lambda, gamma) grid for the relaxed lasso.
struct FitSequence {
    std::string method;
    std::vector<FitEntry> path;
    std::vector<int> skipped_k;  // sizes dropped due to rank deficiency
};

/// Strictly descending positive penalties.
struct PenaltyGrid {
    std::vector<double> values;

    /// count log-spaced values from lambda_max down to lambda_min.
    static PenaltyGrid log_spaced(int count, double lambda_min, double lambda_max);
};

inline constexpr int kBestSubsetMaxPredictors = 20;

/// Least-squares fits on the nested top-k sets of a ranking, k = 0..k_max.
FitSequence fit_ls_ri(const Dataset& data, const RankingResult& ranking, int k_max);

/// Ridge fits on the same nested sets, one entry per (k, lambda), plus
/// the k = 0 null model.
FitSequence fit_ridge_ri(const Dataset& data, const RankingResult& ranking, int k_max,
                         const PenaltyGrid& grid);

/// Greedy RSS minimization; ties broken by ascending predictor index.
FitSequence forward_stepwise(const Dataset& data, int k_max);

/// Exhaustive search over all size-k subsets for k = 0..k_max; ties go to
/// the lexicographically smallest index set. Guarded by max_p.
FitSequence best_subset(const Dataset& data, int k_max, int max_p = kBestSubsetMaxPredictors);

/// Cyclic coordinate descent for  min ||y - X b||^2 + lambda ||b||_1  on a
/// log-spaced lambda grid from lambda_max = 2 max|X^T y| down to
/// lambda_min_ratio * lambda_max, warm-started along the path.
FitSequence lasso_path(const Dataset& data, int n_lambda, double lambda_min_ratio);

/// gamma * lasso(lambda) + (1 - gamma) * LS refit on the lasso support,
/// over the full lambda path and an even gamma grid on [0, 1].
FitSequence relaxed_lasso_path(const Dataset& data, int n_lambda, double lambda_min_ratio,
                               int n_gamma);

/// Default lambda_min_ratio: 1e-3 when n > p, 1e-2 otherwise.
inline double default_lambda_min_ratio(Index n, Index p) { return n > p ? 1e-3 : 1e-2; }

inline constexpr int kDefaultLassoPathLength = 50;
inline constexpr int kDefaultGammaCount = 10;

}  // namespace riselect
