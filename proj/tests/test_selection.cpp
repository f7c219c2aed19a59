#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "riselect/errors.hpp"
#include "riselect/numerics.hpp"
#include "riselect/ranking.hpp"
#include "riselect/selection.hpp"
#include "riselect/standardize.hpp"
#include "test_util.hpp"

using namespace riselect;
using testutil::random_dataset;
using testutil::random_matrix;
using testutil::random_vector;
using testutil::signal_dataset;

namespace {

double rss_of(const Dataset& ds, const CoefficientVector& beta) {
    return (ds.response - ds.predictors * beta.values).squaredNorm();
}

Matrix cols(const Matrix& x, const std::vector<int>& idx) {
    Matrix sub(x.rows(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) sub.col(a) = x.col(idx[a]);
    return sub;
}

// Brute-force stepwise oracle: full projection per candidate, no
// incremental updates.
std::vector<int> stepwise_oracle(const Dataset& ds, int k_max) {
    std::vector<int> active;
    const int p = static_cast<int>(ds.p());
    for (int k = 0; k < k_max; ++k) {
        int best_j = -1;
        double best_rss = std::numeric_limits<double>::infinity();
        for (int j = 0; j < p; ++j) {
            if (std::find(active.begin(), active.end(), j) != active.end()) continue;
            std::vector<int> trial = active;
            trial.push_back(j);
            const Matrix sub = cols(ds.predictors, trial);
            const Vector fit =
                sub * sub.fullPivHouseholderQr().solve(ds.response);
            const double rss = (ds.response - fit).squaredNorm();
            if (rss < best_rss) {
                best_rss = rss;
                best_j = j;
            }
        }
        active.push_back(best_j);
    }
    return active;
}

// Independent best-subset oracle: recursive enumeration + QR solves.
void enumerate_subsets(int p, int k, int start, std::vector<int>& current,
                       const Dataset& ds, double& best_rss, std::vector<int>& best) {
    if (static_cast<int>(current.size()) == k) {
        const Matrix sub = cols(ds.predictors, current);
        const Vector fit = sub * sub.fullPivHouseholderQr().solve(ds.response);
        const double rss = (ds.response - fit).squaredNorm();
        if (rss < best_rss) {
            best_rss = rss;
            best = current;
        }
        return;
    }
    for (int j = start; j < p; ++j) {
        current.push_back(j);
        enumerate_subsets(p, k, j + 1, current, ds, best_rss, best);
        current.pop_back();
    }
}

std::vector<int> best_subset_oracle(const Dataset& ds, int k) {
    std::vector<int> best, current;
    double best_rss = std::numeric_limits<double>::infinity();
    enumerate_subsets(static_cast<int>(ds.p()), k, 0, current, ds, best_rss, best);
    return best;
}

void check_kkt(const Dataset& ds, const FitEntry& e, double tol) {
    const double lambda = e.hyper.at("lambda");
    const Vector g =
        2.0 * ds.predictors.transpose() * (ds.response - ds.predictors * e.coefficients.values);
    for (Index j = 0; j < ds.p(); ++j) {
        const double b = e.coefficients.values[j];
        if (b == 0.0)
            CHECK(std::fabs(g[j]) <= lambda + tol);
        else
            CHECK(std::fabs(g[j] - lambda * (b > 0 ? 1.0 : -1.0)) <= tol);
    }
}

}  // namespace

TEST_CASE("fit_ls_ri walks the ranking with least-squares refits") {
    const Dataset ds = signal_dataset(40, 6, 21);
    const RankingResult ranking = rank_criz(ds);
    const FitSequence seq = fit_ls_ri(ds, ranking, 6);

    REQUIRE(seq.path.size() == 7);
    CHECK(seq.path[0].coefficients.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(seq.path[0].active_set.size() == 0);

    // k = p equals the global least squares fit
    const CoefficientVector full = least_squares(ds.predictors, ds.response);
    CHECK((seq.path[6].coefficients.values - full.values).cwiseAbs().maxCoeff() < 1e-10);

    // nested active sets following ranking.order
    for (int k = 1; k <= 6; ++k) {
        const auto& active = seq.path[k].active_set.indices;
        REQUIRE(static_cast<int>(active.size()) == k);
        for (int a = 0; a < k; ++a) CHECK(active[a] == ranking.order[a]);
    }
}

TEST_CASE("fit_ls_ri on orthonormal columns reproduces marginal correlations") {
    Dataset ds = random_dataset(30, 4, 22);
    const Eigen::HouseholderQR<Matrix> qr(ds.predictors);
    RawData raw;
    raw.predictors = Matrix(qr.householderQ()).leftCols(4);
    raw.response = ds.response;
    ds = standardize(raw);

    const RankingResult ranking = rank_sis(ds);
    const Vector c = ds.predictors.transpose() * ds.response;
    const FitSequence seq = fit_ls_ri(ds, ranking, 4);
    for (int k = 1; k <= 4; ++k)
        for (int j : seq.path[k].active_set.indices)
            CHECK(seq.path[k].coefficients.values[j] == doctest::Approx(c[j]).epsilon(1e-9));
}

TEST_CASE("fit_ridge_ri matches scalar ridge and shrinks to zero") {
    const Dataset ds = signal_dataset(30, 5, 23);
    const RankingResult ranking = rank_criz(ds);

    PenaltyGrid grid;
    grid.values = {1e8, 1.0};
    const FitSequence seq = fit_ridge_ri(ds, ranking, 3, grid);
    REQUIRE(seq.path.size() == 1 + 3 * 2);

    // k = 1, lambda = 1: unit-norm column halves the correlation
    const FitEntry& k1 = seq.path[2];
    CHECK(k1.hyper.at("k") == 1.0);
    CHECK(k1.hyper.at("lambda") == 1.0);
    const int top = ranking.order[0];
    const double xty = ds.predictors.col(top).dot(ds.response);
    CHECK(k1.coefficients.values[top] == doctest::Approx(xty / 2.0).epsilon(1e-10));

    // huge penalty flattens everything
    const FitEntry& big = seq.path[1];
    CHECK(big.hyper.at("lambda") == 1e8);
    CHECK(big.coefficients.values.cwiseAbs().maxCoeff() < 1e-6);

    // dense-solve oracle at (k = 3, lambda = 1)
    const FitEntry& k3 = seq.path[6];
    const Matrix sub = cols(ds.predictors, k3.active_set.indices);
    Matrix a = sub.transpose() * sub + Matrix::Identity(3, 3);
    const Vector oracle = a.fullPivLu().solve(sub.transpose() * ds.response);
    for (int i = 0; i < 3; ++i)
        CHECK(k3.coefficients.values[k3.active_set.indices[i]] ==
              doctest::Approx(oracle[i]).epsilon(1e-10));

    PenaltyGrid bad;
    bad.values = {1.0, -0.5};
    CHECK_THROWS_AS(fit_ridge_ri(ds, ranking, 2, bad), NonPositivePenalty);
}

TEST_CASE("forward stepwise matches the brute-force projection oracle") {
    for (std::uint64_t seed : {31, 32, 33}) {
        const Dataset ds = signal_dataset(20, 6, seed);
        const FitSequence seq = forward_stepwise(ds, 3);
        const std::vector<int> oracle = stepwise_oracle(ds, 3);
        REQUIRE(seq.path.size() == 4);
        CHECK(seq.path[3].active_set.indices == oracle);
    }
}

TEST_CASE("forward stepwise on orthogonal design follows |X^T y| order") {
    Dataset ds = random_dataset(30, 5, 34);
    const Eigen::HouseholderQR<Matrix> qr(ds.predictors);
    RawData raw;
    raw.predictors = Matrix(qr.householderQ()).leftCols(5);
    raw.response = ds.response;
    ds = standardize(raw);

    const FitSequence seq = forward_stepwise(ds, 5);
    const std::vector<int> expected = rank_sis(ds).order;
    CHECK(seq.path[5].active_set.indices == expected);
}

TEST_CASE("forward stepwise finds an exact two-term signal") {
    Matrix q = Matrix::Identity(12, 9);
    RawData raw;
    raw.predictors = q;
    raw.response = q.col(3) + q.col(7);
    // orthonormal identity columns are constant-free after centering only
    // if we skip standardization; use scale-only data through Dataset fields
    Dataset ds;
    ds.predictors = raw.predictors;
    ds.response = raw.response / raw.response.norm();
    ds.centers_x = Vector::Zero(9);
    ds.scales_x = Vector::Ones(9);
    ds.center_y = 0.0;
    ds.scale_y = raw.response.norm();
    const FitSequence seq = forward_stepwise(ds, 2);
    std::vector<int> found = seq.path[2].active_set.indices;
    std::sort(found.begin(), found.end());
    CHECK(found == std::vector<int>{3, 7});
}

TEST_CASE("best subset matches an independent enumeration oracle") {
    for (std::uint64_t seed : {41, 42}) {
        const Dataset ds = signal_dataset(30, 8, seed);
        const FitSequence seq = best_subset(ds, 3);
        for (int k = 1; k <= 3; ++k)
            CHECK(seq.path[k].active_set.indices == best_subset_oracle(ds, k));
    }
}

TEST_CASE("best subset endpoints: k=1 is the top marginal, k=p the full fit") {
    const Dataset ds = signal_dataset(25, 6, 43);
    const FitSequence seq = best_subset(ds, 6);

    const Vector c = ds.predictors.transpose() * ds.response;
    int top = 0;
    for (int j = 1; j < 6; ++j)
        if (c[j] * c[j] > c[top] * c[top]) top = j;
    CHECK(seq.path[1].active_set.indices == std::vector<int>{top});

    const CoefficientVector full = least_squares(ds.predictors, ds.response);
    CHECK((seq.path[6].coefficients.values - full.values).cwiseAbs().maxCoeff() < 1e-9);

    CHECK_THROWS_AS(best_subset(random_dataset(30, 25, 44), 2), TooManyPredictors);
}

TEST_CASE("definitional dominance: bs <= fs <= ls-ri in RSS at every size") {
    for (std::uint64_t seed : {51, 52, 53}) {
        const Dataset ds = signal_dataset(35, 8, seed);
        const FitSequence bs = best_subset(ds, 5);
        const FitSequence fs = forward_stepwise(ds, 5);
        const FitSequence ri = fit_ls_ri(ds, rank_criz(ds), 5);
        for (int k = 1; k <= 5; ++k) {
            const double rss_bs = rss_of(ds, bs.path[k].coefficients);
            const double rss_fs = rss_of(ds, fs.path[k].coefficients);
            const double rss_ri = rss_of(ds, ri.path[k].coefficients);
            CHECK(rss_bs <= rss_fs + 1e-12);
            CHECK(rss_fs <= rss_ri + 1e-12);
        }
    }
}

TEST_CASE("lasso scalar case soft-thresholds the correlation") {
    RawData raw;
    raw.predictors = random_vector(25, 61);
    raw.response = 0.9 * raw.predictors.col(0) + 0.2 * random_vector(25, 62);
    const Dataset ds = standardize(raw);
    const double xty = ds.predictors.col(0).dot(ds.response);

    const FitSequence seq = lasso_path(ds, 10, 0.01);
    for (const FitEntry& e : seq.path) {
        const double lambda = e.hyper.at("lambda");
        const double expected =
            std::fabs(xty) > lambda / 2.0
                ? (xty > 0 ? xty - lambda / 2.0 : xty + lambda / 2.0)
                : 0.0;
        CHECK(e.coefficients.values[0] == doctest::Approx(expected).epsilon(1e-7));
    }
    // the first grid point carries lambda_max and the all-zero solution
    CHECK(seq.path.front().hyper.at("lambda") == doctest::Approx(2.0 * std::fabs(xty)));
    CHECK(seq.path.front().coefficients.support.empty());
}

TEST_CASE("lasso on orthonormal design soft-thresholds every coordinate") {
    Dataset ds = random_dataset(40, 5, 63);
    const Eigen::HouseholderQR<Matrix> qr(ds.predictors);
    RawData raw;
    raw.predictors = Matrix(qr.householderQ()).leftCols(5);
    raw.response = ds.response;
    ds = standardize(raw);

    const Vector c = ds.predictors.transpose() * ds.response;
    const FitSequence seq = lasso_path(ds, 8, 0.05);
    for (const FitEntry& e : seq.path) {
        const double t = e.hyper.at("lambda") / 2.0;
        for (int j = 0; j < 5; ++j) {
            const double expected = std::fabs(c[j]) > t ? (c[j] > 0 ? c[j] - t : c[j] + t) : 0.0;
            CHECK(e.coefficients.values[j] == doctest::Approx(expected).epsilon(1e-6));
        }
    }
}

TEST_CASE("lasso satisfies the KKT conditions along the path") {
    for (std::uint64_t seed : {71, 72}) {
        const Dataset ds = signal_dataset(30, 12, seed);
        const FitSequence seq = lasso_path(ds, 30, 1e-3);
        REQUIRE(seq.path.size() == 30);
        for (const FitEntry& e : seq.path) check_kkt(ds, e, 1e-6);
    }
    // p > n case
    const Dataset wide = signal_dataset(25, 60, 73);
    for (const FitEntry& e : lasso_path(wide, 25, 1e-2).path) check_kkt(wide, e, 1e-6);
}

TEST_CASE("relaxed lasso blends the lasso and the refit") {
    const Dataset ds = signal_dataset(30, 7, 81);
    const int n_gamma = 5;
    const FitSequence relaxed = relaxed_lasso_path(ds, 12, 1e-2, n_gamma);
    const FitSequence plain = lasso_path(ds, 12, 1e-2);
    REQUIRE(relaxed.path.size() == plain.path.size() * n_gamma);

    for (std::size_t i = 0; i < plain.path.size(); ++i) {
        const FitEntry& lasso_entry = plain.path[i];
        const FitEntry& g0 = relaxed.path[i * n_gamma];          // gamma = 0
        const FitEntry& gmid = relaxed.path[i * n_gamma + 2];    // gamma = 0.5
        const FitEntry& g1 = relaxed.path[i * n_gamma + 4];      // gamma = 1

        CHECK(g1.hyper.at("gamma") == 1.0);
        CHECK((g1.coefficients.values - lasso_entry.coefficients.values).cwiseAbs().maxCoeff() <
              1e-12);

        // gamma = 0 is the least-squares refit on the lasso support
        const auto& support = lasso_entry.active_set.indices;
        if (!support.empty()) {
            const Matrix sub = cols(ds.predictors, support);
            const CoefficientVector refit = least_squares(sub, ds.response);
            for (std::size_t a = 0; a < support.size(); ++a)
                CHECK(g0.coefficients.values[support[a]] ==
                      doctest::Approx(refit.values[a]).epsilon(1e-9));
        } else {
            CHECK(g0.coefficients.values.cwiseAbs().maxCoeff() == 0.0);
        }

        // affine in gamma: midpoint equals the average of the endpoints
        const Vector blend = 0.5 * (g0.coefficients.values + g1.coefficients.values);
        CHECK((gmid.coefficients.values - blend).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("single-predictor relaxed lasso midpoint averages threshold and correlation") {
    RawData raw;
    raw.predictors = random_vector(20, 82);
    raw.response = raw.predictors.col(0) + 0.1 * random_vector(20, 83);
    const Dataset ds = standardize(raw);
    const double xty = ds.predictors.col(0).dot(ds.response);

    const FitSequence relaxed = relaxed_lasso_path(ds, 6, 0.1, 3);
    for (const FitEntry& e : relaxed.path) {
        if (e.hyper.at("gamma") != 0.5) continue;
        const double lambda = e.hyper.at("lambda");
        if (std::fabs(xty) <= lambda / 2.0) continue;
        const double soft = xty > 0 ? xty - lambda / 2.0 : xty + lambda / 2.0;
        CHECK(e.coefficients.values[0] == doctest::Approx(0.5 * (soft + xty)).epsilon(1e-7));
    }
}

TEST_CASE("every path entry keeps support inside the active set") {
    const Dataset ds = signal_dataset(30, 9, 91);
    std::vector<FitSequence> seqs;
    seqs.push_back(fit_ls_ri(ds, rank_criz(ds), 6));
    PenaltyGrid grid = PenaltyGrid::log_spaced(4, 1e-3, 1e2);
    seqs.push_back(fit_ridge_ri(ds, rank_sis(ds), 4, grid));
    seqs.push_back(forward_stepwise(ds, 6));
    seqs.push_back(best_subset(ds, 4));
    seqs.push_back(lasso_path(ds, 15, 1e-2));
    seqs.push_back(relaxed_lasso_path(ds, 15, 1e-2, 4));

    for (const FitSequence& seq : seqs) {
        for (const FitEntry& e : seq.path) {
            for (int j : e.coefficients.support) {
                CHECK(std::find(e.active_set.indices.begin(), e.active_set.indices.end(), j) !=
                      e.active_set.indices.end());
            }
        }
    }
}

TEST_CASE("penalty grids are strictly descending and log-spaced") {
    const PenaltyGrid grid = PenaltyGrid::log_spaced(10, 1e-4, 1e3);
    REQUIRE(grid.values.size() == 10);
    CHECK(grid.values.front() == doctest::Approx(1e3));
    CHECK(grid.values.back() == doctest::Approx(1e-4));
    for (std::size_t i = 1; i < grid.values.size(); ++i) {
        CHECK(grid.values[i] < grid.values[i - 1]);
        const double ratio = grid.values[i] / grid.values[i - 1];
        CHECK(ratio == doctest::Approx(grid.values[1] / grid.values[0]).epsilon(1e-9));
    }
    CHECK_THROWS_AS(PenaltyGrid::log_spaced(5, -1.0, 1.0), ConfigError);
}

TEST_CASE("lasso rejects bad grid parameters") {
    const Dataset ds = signal_dataset(20, 4, 92);
    CHECK_THROWS_AS(lasso_path(ds, 1, 0.1), ConfigError);
    CHECK_THROWS_AS(lasso_path(ds, 10, 1.5), ConfigError);
    CHECK_THROWS_AS(relaxed_lasso_path(ds, 10, 0.1, 1), ConfigError);
}
