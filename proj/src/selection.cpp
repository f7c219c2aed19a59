#include "riselect/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "riselect/errors.hpp"
#include "riselect/numerics.hpp"

namespace riselect {

namespace {

CoefficientVector scatter(const Vector& sub_coef, const std::vector<int>& indices, Index p) {
    Vector full = Vector::Zero(p);
    for (std::size_t a = 0; a < indices.size(); ++a) full[indices[a]] = sub_coef[a];
    return make_coefficients(std::move(full));
}

Matrix submatrix(const Matrix& x, const std::vector<int>& indices) {
    Matrix sub(x.rows(), indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a) sub.col(a) = x.col(indices[a]);
    return sub;
}

FitEntry null_entry(Index p, std::map<std::string, double> hyper) {
    FitEntry e;
    e.hyper = std::move(hyper);
    e.coefficients = CoefficientVector::zeros(p);
    return e;
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

}  // namespace

PenaltyGrid PenaltyGrid::log_spaced(int count, double lambda_min, double lambda_max) {
    if (count < 1 || lambda_min <= 0.0 || lambda_min > lambda_max)
        throw ConfigError("penalty grid requires count >= 1 and 0 < lambda_min <= lambda_max");
    PenaltyGrid grid;
    grid.values.resize(count);
    if (count == 1) {
        grid.values[0] = lambda_max;
        return grid;
    }
    const double log_hi = std::log(lambda_max);
    const double step = (std::log(lambda_min) - log_hi) / (count - 1);
    for (int i = 0; i < count; ++i) grid.values[i] = std::exp(log_hi + i * step);
    return grid;
}

FitSequence fit_ls_ri(const Dataset& data, const RankingResult& ranking, int k_max) {
    FitSequence seq;
    seq.method = "ls-" + to_string(ranking.method);
    seq.path.push_back(null_entry(data.p(), {{"k", 0.0}}));
    std::vector<int> active;
    for (int k = 1; k <= k_max; ++k) {
        active.push_back(ranking.order[k - 1]);
        FitEntry e;
        e.active_set.indices = active;
        e.hyper = {{"k", static_cast<double>(k)}};
        try {
            CoefficientVector sub = least_squares(submatrix(data.predictors, active), data.response);
            e.coefficients = scatter(sub.values, active, data.p());
        } catch (const RankDeficient&) {
            seq.skipped_k.push_back(k);
            continue;
        }
        seq.path.push_back(std::move(e));
    }
    return seq;
}

FitSequence fit_ridge_ri(const Dataset& data, const RankingResult& ranking, int k_max,
                         const PenaltyGrid& grid) {
    if (grid.values.empty()) throw ConfigError("ridge penalty grid is empty");
    for (double l : grid.values)
        if (l <= 0.0) throw NonPositivePenalty(l);

    FitSequence seq;
    seq.method = "ridge-" + to_string(ranking.method);
    seq.path.push_back(null_entry(data.p(), {{"k", 0.0}, {"lambda", 0.0}}));
    std::vector<int> active;
    for (int k = 1; k <= k_max; ++k) {
        active.push_back(ranking.order[k - 1]);
        Matrix sub = submatrix(data.predictors, active);
        for (double lambda : grid.values) {
            FitEntry e;
            e.active_set.indices = active;
            e.hyper = {{"k", static_cast<double>(k)}, {"lambda", lambda}};
            e.coefficients = scatter(ridge_solve(sub, data.response, lambda).values, active, data.p());
            seq.path.push_back(std::move(e));
        }
    }
    return seq;
}

FitSequence forward_stepwise(const Dataset& data, int k_max) {
    const Index n = data.n();
    const Index p = data.p();
    FitSequence seq;
    seq.method = "fs";
    seq.path.push_back(null_entry(p, {{"k", 0.0}}));

    // Deflated copies: residual r and candidate columns orthogonalized
    // against the growing basis Q. Gain of candidate j at each step is
    // (x~_j . r)^2 / ||x~_j||^2.
    Matrix xo = data.predictors;
    Vector r = data.response;
    Matrix q_basis(n, std::min<Index>(k_max, p));
    std::vector<bool> available(p, true);
    std::vector<int> active;

    const double kCollinearTol = 1e-12;
    for (int k = 1; k <= k_max; ++k) {
        int best_j = -1;
        double best_gain = -1.0;
        for (Index j = 0; j < p; ++j) {
            if (!available[j]) continue;
            const double nsq = xo.col(j).squaredNorm();
            if (nsq <= kCollinearTol) continue;
            const double gain = std::pow(xo.col(j).dot(r), 2) / nsq;
            if (gain > best_gain) {
                best_gain = gain;
                best_j = static_cast<int>(j);
            }
        }
        if (best_j < 0) break;  // every remaining column is collinear with the active set

        Vector q = xo.col(best_j);
        if (k > 1) {
            auto basis = q_basis.leftCols(k - 1);
            q -= basis * (basis.transpose() * q);  // second orthogonalization pass
        }
        q /= q.norm();
        q_basis.col(k - 1) = q;
        available[best_j] = false;
        active.push_back(best_j);

        r -= q * q.dot(r);
        for (Index j = 0; j < p; ++j)
            if (available[j]) xo.col(j) -= q * q.dot(xo.col(j));

        FitEntry e;
        e.active_set.indices = active;
        e.hyper = {{"k", static_cast<double>(k)}};
        CoefficientVector sub = least_squares(submatrix(data.predictors, active), data.response);
        e.coefficients = scatter(sub.values, active, p);
        seq.path.push_back(std::move(e));
    }
    return seq;
}

FitSequence best_subset(const Dataset& data, int k_max, int max_p) {
    const int p = static_cast<int>(data.p());
    if (p > max_p) throw TooManyPredictors(p, max_p);
    k_max = std::min(k_max, p);

    SubsetRSquared subset_r2(data.predictors, data.response);
    FitSequence seq;
    seq.method = "bs";
    seq.path.push_back(null_entry(p, {{"k", 0.0}}));

    std::vector<int> idx, best;
    for (int k = 1; k <= k_max; ++k) {
        idx.resize(k);
        for (int a = 0; a < k; ++a) idx[a] = a;
        best = idx;
        double best_r2 = subset_r2(idx);
        // Lexicographic enumeration; strict improvement keeps the first
        // (smallest) subset on ties.
        while (true) {
            int a = k - 1;
            while (a >= 0 && idx[a] == p - k + a) --a;
            if (a < 0) break;
            ++idx[a];
            for (int b = a + 1; b < k; ++b) idx[b] = idx[b - 1] + 1;
            const double r2 = subset_r2(idx);
            if (r2 > best_r2) {
                best_r2 = r2;
                best = idx;
            }
        }
        Vector coef;
        subset_r2(best, &coef);
        FitEntry e;
        e.active_set.indices = best;
        e.hyper = {{"k", static_cast<double>(k)}};
        e.coefficients = scatter(coef, best, p);
        seq.path.push_back(std::move(e));
    }
    return seq;
}

namespace {

// One coordinate-descent pass over `set`; returns the largest coefficient
// change. Columns have unit norm, so each update is a pure soft-threshold.
double cd_sweep(const Matrix& x, Vector& beta, Vector& r, double lambda,
                const std::vector<int>& set) {
    double max_change = 0.0;
    for (int j : set) {
        const double old = beta[j];
        const double z = x.col(j).dot(r) + old;
        const double next = soft_threshold(z, lambda / 2.0);
        if (next != old) {
            r -= x.col(j) * (next - old);
            beta[j] = next;
            max_change = std::max(max_change, std::fabs(next - old));
        }
    }
    return max_change;
}

bool kkt_satisfied(const Matrix& x, const Vector& y, const Vector& beta, double lambda,
                   double tol, Vector& r) {
    r = y - x * beta;  // exact residual, discarding accumulated drift
    const Vector g = 2.0 * (x.transpose() * r);
    for (Index j = 0; j < beta.size(); ++j) {
        if (beta[j] == 0.0) {
            if (std::fabs(g[j]) > lambda + tol) return false;
        } else if (std::fabs(g[j] - lambda * (beta[j] > 0.0 ? 1.0 : -1.0)) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

FitSequence lasso_path(const Dataset& data, int n_lambda, double lambda_min_ratio) {
    if (n_lambda < 2) throw ConfigError("lasso path needs at least 2 lambda values");
    if (lambda_min_ratio <= 0.0 || lambda_min_ratio >= 1.0)
        throw ConfigError("lambda_min_ratio must lie in (0, 1)");

    const Matrix& x = data.predictors;
    const Vector& y = data.response;
    const Index p = data.p();

    const double lambda_max = 2.0 * (x.transpose() * y).cwiseAbs().maxCoeff();
    PenaltyGrid grid =
        PenaltyGrid::log_spaced(n_lambda, lambda_min_ratio * lambda_max, lambda_max);

    constexpr long kMaxSweeps = 100000;
    constexpr double kChangeTol = 1e-7;
    constexpr double kKktTol = 0.5e-6;

    FitSequence seq;
    seq.method = "lasso";
    Vector beta = Vector::Zero(p);
    Vector r = y;
    std::vector<int> all(p);
    for (Index j = 0; j < p; ++j) all[j] = static_cast<int>(j);

    for (double lambda : grid.values) {
        long sweeps = 0;
        bool converged = false;
        while (sweeps < kMaxSweeps) {
            double change = cd_sweep(x, beta, r, lambda, all);
            ++sweeps;
            std::vector<int> active;
            for (Index j = 0; j < p; ++j)
                if (beta[j] != 0.0) active.push_back(static_cast<int>(j));
            while (change >= kChangeTol && sweeps < kMaxSweeps && !active.empty()) {
                change = cd_sweep(x, beta, r, lambda, active);
                ++sweeps;
            }
            if (change < kChangeTol && kkt_satisfied(x, y, beta, lambda, kKktTol, r)) {
                converged = true;
                break;
            }
        }
        if (!converged) throw NoConvergence(lambda);

        FitEntry e;
        e.hyper = {{"lambda", lambda}};
        e.coefficients = make_coefficients(beta);
        e.active_set.indices = e.coefficients.support;
        seq.path.push_back(std::move(e));
    }
    return seq;
}

FitSequence relaxed_lasso_path(const Dataset& data, int n_lambda, double lambda_min_ratio,
                               int n_gamma) {
    if (n_gamma < 2) throw ConfigError("relaxed lasso needs at least 2 gamma values");
    FitSequence lasso = lasso_path(data, n_lambda, lambda_min_ratio);

    FitSequence seq;
    seq.method = "rlasso";
    std::map<std::vector<int>, Vector> refit_cache;
    const double rank_tol = default_rank_tol(data.n(), data.p());

    for (const FitEntry& point : lasso.path) {
        const std::vector<int>& support = point.active_set.indices;
        auto it = refit_cache.find(support);
        if (it == refit_cache.end()) {
            Vector refit = Vector::Zero(data.p());
            if (!support.empty()) {
                Matrix sub = submatrix(data.predictors, support);
                CoefficientVector ls;
                try {
                    ls = least_squares(sub, data.response);
                } catch (const RankDeficient&) {
                    ls = least_squares_min_norm(sub, data.response, rank_tol);
                }
                refit = scatter(ls.values, support, data.p()).values;
            }
            it = refit_cache.emplace(support, std::move(refit)).first;
        }
        for (int g = 0; g < n_gamma; ++g) {
            const double gamma = static_cast<double>(g) / (n_gamma - 1);
            FitEntry e;
            e.active_set = point.active_set;
            e.hyper = {{"gamma", gamma}, {"lambda", point.hyper.at("lambda")}};
            e.coefficients =
                make_coefficients(gamma * point.coefficients.values + (1.0 - gamma) * it->second);
            seq.path.push_back(std::move(e));
        }
    }
    return seq;
}

}  // namespace riselect
