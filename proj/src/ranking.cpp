#include "riselect/ranking.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "riselect/errors.hpp"
#include "riselect/numerics.hpp"

namespace riselect {

std::string to_string(RankMethod m) {
    switch (m) {
        case RankMethod::Sis: return "sis";
        case RankMethod::Gd: return "gd";
        case RankMethod::Cri: return "cri";
        case RankMethod::CriZ: return "criz";
    }
    return "?";
}

std::vector<int> ranking_order(const Vector& key) {
    std::vector<int> order(key.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&key](int a, int b) { return key[a] > key[b]; });
    return order;
}

RankingResult rank_sis(const Dataset& data) {
    RankingResult out;
    out.method = RankMethod::Sis;
    out.scores = data.predictors.transpose() * data.response;
    out.order = ranking_order(out.scores.cwiseAbs());
    return out;
}

RankingResult rank_gd(const Dataset& data, int max_p) {
    const int p = static_cast<int>(data.p());
    if (p > max_p) throw TooManyPredictors(p, max_p);

    // R^2 for every subset bitmask, computed once and shared across the
    // p per-predictor Shapley sums.
    SubsetRSquared subset_r2(data.predictors, data.response);
    const std::size_t n_masks = std::size_t{1} << p;
    std::vector<double> r2(n_masks);
    std::vector<int> indices;
    indices.reserve(p);
    r2[0] = 0.0;
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        indices.clear();
        for (int j = 0; j < p; ++j)
            if (mask & (std::size_t{1} << j)) indices.push_back(j);
        r2[mask] = subset_r2(indices);
    }

    // 1 / C(p-1, m) for m = 0..p-1; exact in double for p <= 20.
    std::vector<double> inv_binom(p);
    double binom = 1.0;
    for (int m = 0; m < p; ++m) {
        inv_binom[m] = 1.0 / binom;
        binom = binom * (p - 1 - m) / (m + 1);
    }

    RankingResult out;
    out.method = RankMethod::Gd;
    out.scores = Vector::Zero(p);
    for (int i = 0; i < p; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        double acc = 0.0;
        for (std::size_t mask = 0; mask < n_masks; ++mask) {
            if (mask & bit) continue;
            acc += inv_binom[std::popcount(mask)] * (r2[mask | bit] - r2[mask]);
        }
        out.scores[i] = acc / p;
    }
    out.order = ranking_order(out.scores);
    return out;
}

namespace {

// Shared CRI/CRI.Z front end: w = V_r U_r^T y, squared entrywise.
struct SvdScores {
    ReducedSvd svd;
    Vector w_sq;
};

SvdScores svd_scores(const Dataset& data, double rank_tol) {
    if (rank_tol < 0.0) rank_tol = default_rank_tol(data.n(), data.p());
    SvdScores s;
    s.svd = reduced_svd(data.predictors, rank_tol);
    Vector w = s.svd.right * (s.svd.left.transpose() * data.response);
    s.w_sq = w.cwiseProduct(w);
    return s;
}

}  // namespace

RankingResult rank_cri(const Dataset& data, double rank_tol) {
    SvdScores s = svd_scores(data, rank_tol);
    Matrix realloc = s.svd.right * s.svd.singular_values.asDiagonal() * s.svd.right.transpose();
    RankingResult out;
    out.method = RankMethod::Cri;
    out.scores = realloc.cwiseProduct(realloc) * s.w_sq;
    out.order = ranking_order(out.scores);
    return out;
}

RankingResult rank_criz(const Dataset& data, double rank_tol) {
    RankingResult out;
    out.method = RankMethod::CriZ;
    out.scores = svd_scores(data, rank_tol).w_sq;
    out.order = ranking_order(out.scores);
    return out;
}

RankingResult rank(RankMethod method, const Dataset& data) {
    switch (method) {
        case RankMethod::Sis: return rank_sis(data);
        case RankMethod::Gd: return rank_gd(data);
        case RankMethod::Cri: return rank_cri(data);
        case RankMethod::CriZ: return rank_criz(data);
    }
    throw ConfigError("unknown ranking method");
}

RankMethod rank_method_from_label(const std::string& label) {
    if (label == "sis") return RankMethod::Sis;
    if (label == "gd") return RankMethod::Gd;
    if (label == "cri") return RankMethod::Cri;
    if (label == "criz" || label == "car") return RankMethod::CriZ;
    throw ConfigError("unknown ranking method: " + label);
}

}  // namespace riselect
