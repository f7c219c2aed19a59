#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "riselect/errors.hpp"
#include "riselect/numerics.hpp"
#include "riselect/ranking.hpp"
#include "riselect/simgen.hpp"
#include "riselect/standardize.hpp"
#include "test_util.hpp"

using namespace riselect;
using testutil::random_dataset;
using testutil::random_matrix;
using testutil::random_vector;

namespace {

// Dataset with orthonormal predictor columns (still mean-zero).
Dataset orthonormal_dataset(Index n, Index p, std::uint64_t seed) {
    Dataset ds = random_dataset(n, p, seed);
    const Eigen::HouseholderQR<Matrix> qr(ds.predictors);
    RawData raw;
    raw.predictors = Matrix(qr.householderQ()).leftCols(p);
    raw.response = ds.response;
    return standardize(raw);
}

// Relative Weight through the Johnson-Z route, written as the three-step
// procedure so it shares no code path with rank_cri.
Vector relative_weights_via_z(const Dataset& ds) {
    const Matrix m = inv_sqrt_gram(ds.predictors);  // (X^T X)^{-1/2}
    const Matrix z = ds.predictors * m;
    const Vector w = z.transpose() * ds.response;           // orthogonal contributions
    const Matrix loadings = z.transpose() * ds.predictors;  // corr(z_j, x_i)
    Vector rw = Vector::Zero(ds.p());
    for (Index i = 0; i < ds.p(); ++i)
        for (Index j = 0; j < ds.p(); ++j) rw[i] += loadings(j, i) * loadings(j, i) * w[j] * w[j];
    return rw;
}

// Literal Shapley-sum evaluation of the general-dominance definition for
// one predictor, enumerating subsets with r_squared directly.
double gd_by_definition(const Dataset& ds, int i) {
    const int p = static_cast<int>(ds.p());
    auto r2_of = [&](unsigned mask) {
        std::vector<int> idx;
        for (int j = 0; j < p; ++j)
            if (mask & (1u << j)) idx.push_back(j);
        Matrix sub(ds.n(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) sub.col(a) = ds.predictors.col(idx[a]);
        return r_squared(sub, ds.response);
    };
    auto binom = [](int n, int k) {
        double b = 1.0;
        for (int t = 0; t < k; ++t) b = b * (n - t) / (t + 1);
        return b;
    };
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
        if (mask & (1u << i)) continue;
        const int size = __builtin_popcount(mask);
        total += (r2_of(mask | (1u << i)) - r2_of(mask)) / binom(p - 1, size);
    }
    return total / p;
}

bool is_permutation_of_p(const std::vector<int>& order, int p) {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < p; ++i)
        if (sorted[i] != i) return false;
    return true;
}

}  // namespace

TEST_CASE("SIS scores are the marginal correlations") {
    SUBCASE("single column equal to y scores 1") {
        RawData raw;
        raw.predictors = random_vector(20, 1);
        raw.response = raw.predictors.col(0);
        const Dataset ds = standardize(raw);
        const RankingResult r = rank_sis(ds);
        CHECK(r.scores[0] == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("column orthogonal to y scores 0") {
        Dataset ds = random_dataset(30, 3, 2);
        // replace column 1 by the residual of projecting it off y
        Vector col = ds.predictors.col(1);
        col -= ds.response * ds.response.dot(col);
        RawData raw;
        raw.predictors = ds.predictors;
        raw.predictors.col(1) = col;
        raw.response = ds.response;
        const Dataset clean = standardize(raw);
        CHECK(std::fabs(rank_sis(clean).scores[1]) < 1e-10);
    }
    SUBCASE("ranking uses absolute values but keeps signs in scores") {
        RawData raw;
        raw.predictors = random_matrix(40, 2, 3);
        raw.response = -raw.predictors.col(1) + 0.05 * random_vector(40, 4);
        const Dataset ds = standardize(raw);
        const RankingResult r = rank_sis(ds);
        CHECK(r.scores[1] < 0.0);
        CHECK(r.order.front() == 1);
    }
}

TEST_CASE("suppressor variable ranks low for SIS on the Example 2 design") {
    // Population marginal correlation of x4 with y is exactly zero, so at
    // n = 10^4 its sample correlation is far below the three strong signals.
    const SimDesign d = make_design_custom(2, 10000, 10, 4, 0.7, 6.0, "test");
    const RawData train = draw_split(materialize(d), RngStream(99, 1), Split::Train);
    const RankingResult r = rank_sis(standardize(train));
    const double suppressor = std::fabs(r.scores[3]);
    for (int j : {0, 1, 2}) CHECK(std::fabs(r.scores[j]) > suppressor + 0.2);
}

TEST_CASE("GD on two orthogonal predictors gives the squared correlations") {
    const Dataset ds = orthonormal_dataset(40, 2, 5);
    const RankingResult r = rank_gd(ds);
    const Vector c = ds.predictors.transpose() * ds.response;
    CHECK(r.scores[0] == doctest::Approx(c[0] * c[0]).epsilon(1e-10));
    CHECK(r.scores[1] == doctest::Approx(c[1] * c[1]).epsilon(1e-10));
}

TEST_CASE("GD with a single predictor is its R^2") {
    const Dataset ds = random_dataset(25, 1, 6);
    const RankingResult r = rank_gd(ds);
    CHECK(r.scores[0] ==
          doctest::Approx(r_squared(ds.predictors, ds.response)).epsilon(1e-10));
}

TEST_CASE("GD matches the literal definition on correlated designs") {
    // pairwise correlation about 0.5 via a shared latent factor
    const RngStream s(7, 0);
    RawData raw;
    raw.predictors.resize(50, 3);
    raw.response.resize(50);
    for (int i = 0; i < 50; ++i) {
        const double g = s.normal(4 * i);
        for (int j = 0; j < 3; ++j)
            raw.predictors(i, j) = g + s.normal(4 * i + 1 + j);
        raw.response[i] =
            raw.predictors(i, 0) + 0.5 * raw.predictors(i, 2) + 0.8 * s.normal(500000 + i);
    }
    const Dataset ds = standardize(raw);
    const RankingResult r = rank_gd(ds);
    for (int i = 0; i < 3; ++i)
        CHECK(r.scores[i] == doctest::Approx(gd_by_definition(ds, i)).epsilon(1e-9));
}

TEST_CASE("GD guard rejects too many predictors") {
    const Dataset ds = random_dataset(30, 6, 8);
    CHECK_THROWS_AS(rank_gd(ds, 5), TooManyPredictors);
}

TEST_CASE("CRI and CRI.Z reduce to squared correlations on orthonormal designs") {
    const Dataset ds = orthonormal_dataset(30, 4, 9);
    const Vector c = ds.predictors.transpose() * ds.response;
    const RankingResult cri = rank_cri(ds);
    const RankingResult criz = rank_criz(ds);
    for (int j = 0; j < 4; ++j) {
        CHECK(cri.scores[j] == doctest::Approx(c[j] * c[j]).epsilon(1e-8));
        CHECK(criz.scores[j] == doctest::Approx(c[j] * c[j]).epsilon(1e-8));
    }
}

TEST_CASE("CRI equals relative weights via the Johnson-Z pipeline when full rank") {
    const Dataset ds = random_dataset(30, 5, 10);
    const RankingResult cri = rank_cri(ds);
    const Vector rw = relative_weights_via_z(ds);
    CHECK((cri.scores - rw).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("CRI.Z equals squared entries of (X^T X)^{-1/2} X^T y when full rank") {
    const Dataset ds = random_dataset(30, 5, 11);
    const Vector w =
        inv_sqrt_gram(ds.predictors) * (ds.predictors.transpose() * ds.response);
    const RankingResult criz = rank_criz(ds);
    CHECK((criz.scores - w.cwiseProduct(w)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("score sums equal the full-model R^2, including p > n") {
    for (const auto& [n, p] : std::vector<std::pair<int, int>>{{40, 8}, {15, 40}, {25, 25}}) {
        const Dataset ds = random_dataset(n, p, 100 + p);
        const double r2_full = r_squared(ds.predictors, ds.response);
        CHECK(rank_cri(ds).scores.sum() == doctest::Approx(r2_full).epsilon(1e-8));
        CHECK(rank_criz(ds).scores.sum() == doctest::Approx(r2_full).epsilon(1e-8));
        if (p <= 10) CHECK(rank_gd(ds).scores.sum() == doctest::Approx(r2_full).epsilon(1e-8));
    }
}

TEST_CASE("all rankings coincide on orthonormal designs") {
    const Dataset ds = orthonormal_dataset(50, 6, 12);
    const auto sis = rank_sis(ds).order;
    CHECK(rank_gd(ds).order == sis);
    CHECK(rank_cri(ds).order == sis);
    CHECK(rank_criz(ds).order == sis);
}

TEST_CASE("permuting columns permutes scores identically") {
    const Dataset ds = random_dataset(30, 6, 13);
    std::vector<int> perm{3, 0, 5, 1, 4, 2};
    Dataset permuted = ds;
    for (int j = 0; j < 6; ++j) permuted.predictors.col(j) = ds.predictors.col(perm[j]);

    for (auto method : {RankMethod::Sis, RankMethod::Gd, RankMethod::Cri, RankMethod::CriZ}) {
        const Vector base = rank(method, ds).scores;
        const Vector after = rank(method, permuted).scores;
        for (int j = 0; j < 6; ++j)
            CHECK(after[j] == doctest::Approx(base[perm[j]]).epsilon(1e-9));
    }
}

TEST_CASE("GD dummy property: predictor orthogonal to y and the rest scores 0") {
    Dataset ds = random_dataset(40, 4, 14);
    // project a random column off span{other predictors, y}
    Matrix basis(40, 4);
    basis << ds.predictors.col(0), ds.predictors.col(1), ds.predictors.col(3), ds.response;
    const Matrix gram = basis.transpose() * basis;
    Vector dummy = random_vector(40, 15, 2);
    dummy.array() -= dummy.mean();
    for (int pass = 0; pass < 2; ++pass)
        dummy -= basis * gram.ldlt().solve(basis.transpose() * dummy);
    dummy /= dummy.norm();
    ds.predictors.col(2) = dummy;

    RawData raw;
    raw.predictors = ds.predictors;
    raw.response = ds.response;
    const RankingResult r = rank_gd(standardize(raw));
    CHECK(std::fabs(r.scores[2]) < 1e-10);
}

TEST_CASE("ties order by ascending predictor index") {
    RawData raw;
    raw.predictors.resize(20, 3);
    const Vector base = random_vector(20, 16);
    raw.predictors.col(0) = base;
    raw.predictors.col(1) = 2.0 * base;  // same standardized column twice
    raw.predictors.col(2) = random_vector(20, 17);
    raw.response = base + 0.3 * random_vector(20, 18);
    const Dataset ds = standardize(raw);

    const RankingResult sis = rank_sis(ds);
    CHECK(sis.scores[0] == sis.scores[1]);
    const auto pos = [&](const std::vector<int>& order, int j) {
        return std::find(order.begin(), order.end(), j) - order.begin();
    };
    CHECK(pos(sis.order, 0) + 1 == pos(sis.order, 1));
    CHECK(is_permutation_of_p(sis.order, 3));

    const RankingResult criz = rank_criz(ds);
    CHECK(is_permutation_of_p(criz.order, 3));
}

TEST_CASE("orders are valid permutations sorting scores descending") {
    const Dataset ds = random_dataset(35, 9, 19);
    for (auto method : {RankMethod::Sis, RankMethod::Gd, RankMethod::Cri, RankMethod::CriZ}) {
        const RankingResult r = rank(method, ds);
        CHECK(is_permutation_of_p(r.order, 9));
        const auto key = [&](int j) {
            return method == RankMethod::Sis ? std::fabs(r.scores[j]) : r.scores[j];
        };
        for (std::size_t a = 1; a < r.order.size(); ++a)
            CHECK(key(r.order[a - 1]) >= key(r.order[a]) - 1e-15);
        if (method != RankMethod::Sis) CHECK(r.scores.minCoeff() >= -1e-12);
    }
}
