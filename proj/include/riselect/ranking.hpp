#pragma once

#include <string>
#include <vector>

#include "riselect/types.hpp"

namespace riselect {

enum class RankMethod { Sis, Gd, Cri, CriZ };

std::string to_string(RankMethod m);

/// Per-predictor importance scores and the induced ranking.
///
/// `order` sorts predictors by score descending (SIS: absolute score),
/// ties broken by ascending index. SIS keeps the signed correlations in
/// `scores`; the other methods produce nonnegative scores.
struct RankingResult {
    RankMethod method = RankMethod::Sis;
    Vector scores;           // p
    std::vector<int> order;  // permutation of 0..p-1
};

inline constexpr int kGdMaxPredictors = 20;

/// Marginal correlations X^T y, ranked by absolute value.
RankingResult rank_sis(const Dataset& data);

/// General dominance: the Shapley average of each predictor's incremental
/// R^2 over all sub-models, by one shared enumeration of all 2^p subset
/// R^2 values. Guarded by max_p (default 20).
RankingResult rank_gd(const Dataset& data, int max_p = kGdMaxPredictors);

/// Relative importance via the reduced SVD:
/// D = ((V S V^T) o (V S V^T)) ((V U^T y) o (V U^T y)).
RankingResult rank_cri(const Dataset& data, double rank_tol = -1.0);

/// Identity-reallocation variant: scores (V U^T y) o (V U^T y).
RankingResult rank_criz(const Dataset& data, double rank_tol = -1.0);

RankingResult rank(RankMethod method, const Dataset& data);

/// "sis" | "gd" | "cri" | "criz" (or the alias "car").
RankMethod rank_method_from_label(const std::string& label);

/// Indices 0..p-1 sorted by key descending, ties by ascending index.
std::vector<int> ranking_order(const Vector& key);

}  // namespace riselect
