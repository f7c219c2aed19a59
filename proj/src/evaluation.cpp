#include "riselect/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "riselect/errors.hpp"
#include "riselect/numerics.hpp"
#include "riselect/parallel.hpp"

namespace riselect {

int metric_s(const RankingResult& ranking, const std::vector<int>& true_support) {
    if (true_support.empty()) throw ConfigError("metric S needs a nonempty true support");
    const int p = static_cast<int>(ranking.order.size());
    std::vector<int> position(p, 0);
    for (int r = 0; r < p; ++r) position[ranking.order[r]] = r + 1;
    int s = 0;
    for (int j : true_support) s = std::max(s, position[j]);
    return s;
}

double metric_pr_k(const RankingResult& ranking, const std::vector<int>& true_support, int k) {
    if (k < 1 || k > static_cast<int>(ranking.order.size()))
        throw ConfigError("Pr(k) needs 1 <= k <= p");
    int hits = 0;
    for (int r = 0; r < k; ++r)
        if (std::find(true_support.begin(), true_support.end(), ranking.order[r]) !=
            true_support.end())
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(true_support.size());
}

double metric_f1(const CoefficientVector& estimate, const CoefficientVector& truth) {
    if (estimate.values.size() != truth.values.size())
        throw DimensionMismatch("F1: coefficient lengths differ");
    const auto& est = estimate.support;
    const auto& tru = truth.support;
    if (est.empty() && tru.empty()) return 1.0;
    if (est.empty() || tru.empty()) return 0.0;
    std::size_t hits = 0;
    for (int j : est)
        if (std::find(tru.begin(), tru.end(), j) != tru.end()) ++hits;
    const double precision = static_cast<double>(hits) / est.size();
    const double recall = static_cast<double>(hits) / tru.size();
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double metric_rte(const CoefficientVector& estimate, const CoefficientVector& truth,
                  const Matrix& sigma, double sigma2) {
    if (estimate.values.size() != truth.values.size() || sigma.rows() != estimate.values.size() ||
        sigma.cols() != sigma.rows())
        throw DimensionMismatch("RTE: shapes disagree");
    if (sigma2 <= 0.0) throw ConfigError("RTE needs sigma2 > 0");
    const Vector d = estimate.values - truth.values;
    return d.dot(sigma * d) / sigma2;
}

CoefficientVector to_original_scale(const CoefficientVector& standardized, const Dataset& train) {
    if (standardized.values.size() != train.p())
        throw DimensionMismatch("coefficient length does not match the dataset");
    Vector w = train.scale_y * standardized.values.cwiseQuotient(train.scales_x);
    return make_coefficients(std::move(w));
}

double original_intercept(const CoefficientVector& original_slopes, const Dataset& train) {
    return train.center_y - original_slopes.values.dot(train.centers_x);
}

double prediction_mse(const CoefficientVector& standardized, const Dataset& train,
                      const RawData& data) {
    const CoefficientVector slopes = to_original_scale(standardized, train);
    const double intercept = original_intercept(slopes, train);
    Vector yhat = Vector::Constant(data.n(), intercept);
    for (int j : slopes.support) yhat += slopes.values[j] * data.predictors.col(j);
    return (data.response - yhat).squaredNorm() / static_cast<double>(data.n());
}

namespace {

double hyper_or_zero(const std::map<std::string, double>& hyper, const char* key) {
    auto it = hyper.find(key);
    return it == hyper.end() ? 0.0 : it->second;
}

}  // namespace

TunedFit tune_on_validation(const FitSequence& seq, const RawData& validation,
                            const Dataset& train_standardization) {
    if (seq.path.empty()) throw ConfigError("cannot tune an empty fit sequence");

    const FitEntry* best = nullptr;
    double best_mse = 0.0;
    for (const FitEntry& entry : seq.path) {
        const double mse = prediction_mse(entry.coefficients, train_standardization, validation);
        bool take = false;
        if (!best || mse < best_mse) {
            take = true;
        } else if (mse == best_mse) {
            const auto size = entry.active_set.size();
            const auto best_size = best->active_set.size();
            if (size != best_size) {
                take = size < best_size;
            } else {
                const double l = hyper_or_zero(entry.hyper, "lambda");
                const double bl = hyper_or_zero(best->hyper, "lambda");
                if (l != bl)
                    take = l < bl;
                else
                    take = hyper_or_zero(entry.hyper, "gamma") < hyper_or_zero(best->hyper, "gamma");
            }
        }
        if (take) {
            best = &entry;
            best_mse = mse;
        }
    }

    TunedFit fit;
    fit.method = seq.method;
    fit.chosen_hyper = best->hyper;
    fit.coefficients = best->coefficients;
    fit.validation_mse = best_mse;
    return fit;
}

namespace {

constexpr std::uint64_t kEdfXTag = 100;
constexpr std::uint64_t kEdfNoiseTag = 101;

// Scale-only normalization: unit-norm columns, no centering, so the null
// model predicts exactly zero and full least squares has trace p.
Dataset normalize_scale_only(const RawData& raw) {
    Dataset ds;
    ds.predictors = raw.predictors;
    ds.response = raw.response;
    ds.centers_x = Vector::Zero(raw.p());
    ds.scales_x = Vector(raw.p());
    ds.center_y = 0.0;
    for (Index j = 0; j < raw.p(); ++j) {
        const double norm = ds.predictors.col(j).norm();
        if (norm == 0.0) throw ConstantColumn(static_cast<int>(j));
        ds.scales_x[j] = norm;
        ds.predictors.col(j) /= norm;
    }
    ds.scale_y = ds.response.norm();
    if (ds.scale_y == 0.0) throw ConstantColumn(-1);
    ds.response /= ds.scale_y;
    return ds;
}

bool is_ls_ranked(const std::string& method) { return method.rfind("ls-", 0) == 0; }

// In-sample fitted values of a standardized fit, original scale, no intercept.
Vector fitted_values(const Dataset& ds, const CoefficientVector& coef) {
    Vector f = Vector::Zero(ds.n());
    for (int j : coef.support) f += coef.values[j] * ds.predictors.col(j);
    return ds.scale_y * f;
}

}  // namespace

EdfCurve edf_curve(const MaterializedDesign& md, const std::string& method,
                   const std::vector<int>& sizes, int n_draws, const RngStream& stream,
                   const EdfOptions& options) {
    if (n_draws < 100) throw ConfigError("EDF estimation needs n_draws >= 100");
    const int n = md.design.n;
    const int p = md.design.cov.p;

    std::vector<int> ks = sizes;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (!ks.empty() && (ks.front() < 0 || ks.back() > std::min(n - 1, p)))
        throw ConfigError("EDF sizes must lie in [0, min(n-1, p)]");

    const bool lasso = method == "lasso";
    const double ratio = options.lambda_min_ratio > 0.0 ? options.lambda_min_ratio
                                                        : default_lambda_min_ratio(n, p);
    const int n_series = lasso ? options.n_lambda : static_cast<int>(ks.size());
    const int k_max = ks.empty() ? 0 : ks.back();

    // Fixed design matrix; only the noise is redrawn.
    const RawData base = draw_split(md, stream.derive(kEdfXTag), Split::Train);
    const Matrix& x = base.predictors;
    const Vector mu = x * md.beta0;
    const double sd = std::sqrt(md.design.sigma2);
    const RngStream noise_stream = stream.derive(kEdfNoiseTag);

    std::vector<double> ys(static_cast<std::size_t>(n_draws) * n);
    std::vector<double> fits(static_cast<std::size_t>(n_draws) * n_series * n);
    std::vector<double> sizes_acc(static_cast<std::size_t>(n_draws) * n_series, 0.0);

    parallel_for(static_cast<std::size_t>(n_draws), [&](std::size_t t) {
        const RngStream es = noise_stream.derive(t);
        RawData draw;
        draw.predictors = x;
        draw.response = mu;
        for (int i = 0; i < n; ++i) draw.response[i] += sd * es.normal(i);
        std::copy(draw.response.data(), draw.response.data() + n, ys.begin() + t * n);

        const Dataset ds = normalize_scale_only(draw);
        double* slab = fits.data() + t * static_cast<std::size_t>(n_series) * n;
        double* size_row = sizes_acc.data() + t * static_cast<std::size_t>(n_series);

        auto emit = [&](int series, const CoefficientVector& coef) {
            const Vector f = fitted_values(ds, coef);
            std::copy(f.data(), f.data() + n, slab + static_cast<std::size_t>(series) * n);
            size_row[series] = static_cast<double>(coef.support.size());
        };

        if (lasso) {
            const FitSequence path = lasso_path(ds, options.n_lambda, ratio);
            for (int s = 0; s < n_series; ++s) emit(s, path.path[s].coefficients);
        } else {
            FitSequence seq;
            if (method == "fs") {
                seq = forward_stepwise(ds, k_max);
            } else if (method == "bs") {
                seq = best_subset(ds, k_max, options.bs_max_p);
            } else if (is_ls_ranked(method)) {
                const RankingResult r = rank(rank_method_from_label(method.substr(3)), ds);
                seq = fit_ls_ri(ds, r, k_max);
            } else {
                throw ConfigError("EDF does not support method: " + method);
            }
            // path entries are keyed by their "k"; sizes lost to rank
            // deficiency fall back to the largest smaller model.
            for (int s = 0; s < n_series; ++s) {
                const int want = ks[s];
                const FitEntry* chosen = &seq.path.front();
                for (const FitEntry& e : seq.path) {
                    if (e.hyper.at("k") <= want + 0.5) chosen = &e;
                    else break;
                }
                emit(s, chosen->coefficients);
            }
        }
    });

    // Batch-means covariance: per block b, edf_b = sum_i cov_b(y_i, f_i) / sigma2,
    // reduced in draw order so threading cannot change the result.
    const int n_blocks = std::max(2, std::min(options.n_blocks, n_draws / 2));
    EdfCurve curve;
    curve.method = method;
    curve.points.resize(n_series);

    for (int s = 0; s < n_series; ++s) {
        std::vector<double> block_edf(n_blocks, 0.0);
        double mean_size = 0.0;
        for (int b = 0; b < n_blocks; ++b) {
            const int t0 = static_cast<int>(static_cast<long>(b) * n_draws / n_blocks);
            const int t1 = static_cast<int>(static_cast<long>(b + 1) * n_draws / n_blocks);
            const int tb = t1 - t0;
            double edf_b = 0.0;
            for (int i = 0; i < n; ++i) {
                double sum_y = 0.0, sum_f = 0.0, sum_yf = 0.0;
                for (int t = t0; t < t1; ++t) {
                    const double yv = ys[static_cast<std::size_t>(t) * n + i];
                    const double fv =
                        fits[(static_cast<std::size_t>(t) * n_series + s) * n + i];
                    sum_y += yv;
                    sum_f += fv;
                    sum_yf += yv * fv;
                }
                edf_b += (sum_yf - sum_y * sum_f / tb) / (tb - 1);
            }
            block_edf[b] = edf_b / md.design.sigma2;
        }
        double mean = 0.0;
        for (double e : block_edf) mean += e;
        mean /= n_blocks;
        double var = 0.0;
        for (double e : block_edf) var += (e - mean) * (e - mean);
        var /= (n_blocks - 1);
        for (int t = 0; t < n_draws; ++t)
            mean_size += sizes_acc[static_cast<std::size_t>(t) * n_series + s];

        EdfPoint& pt = curve.points[s];
        pt.k = lasso ? s : ks[s];
        pt.edf = mean;
        pt.se = std::sqrt(var / n_blocks);
        pt.expected_size = mean_size / n_draws;
    }
    return curve;
}

std::vector<MetricRecord> edf_monte_carlo(const SimDesign& design, const std::string& method,
                                          const std::vector<int>& sizes, int n_draws,
                                          const RngStream& stream, const EdfOptions& options) {
    const EdfCurve curve = edf_curve(materialize(design), method, sizes, n_draws, stream, options);
    std::vector<MetricRecord> records;
    records.reserve(curve.points.size() * 3);
    for (const EdfPoint& pt : curve.points) {
        MetricRecord base;
        base.design_id = design.design_id;
        base.example = design.example;
        base.setting = to_string(design.setting);
        base.rho = design.cov.rho;
        base.snr = design.snr;
        base.replication = 1;
        base.method = method;
        base.k = pt.k;

        MetricRecord edf = base;
        edf.metric = "EDF";
        edf.value = pt.edf;
        records.push_back(edf);
        MetricRecord se = base;
        se.metric = "EDF_se";
        se.value = pt.se;
        records.push_back(se);
        MetricRecord esize = base;
        esize.metric = "esize";
        esize.value = pt.expected_size;
        records.push_back(esize);
    }
    return records;
}

std::optional<double> edf_at_expected_size(const EdfCurve& curve, double target_size) {
    std::vector<const EdfPoint*> pts;
    pts.reserve(curve.points.size());
    for (const EdfPoint& p : curve.points) pts.push_back(&p);
    std::sort(pts.begin(), pts.end(), [](const EdfPoint* a, const EdfPoint* b) {
        return a->expected_size < b->expected_size;
    });
    if (pts.empty() || target_size < pts.front()->expected_size ||
        target_size > pts.back()->expected_size)
        return std::nullopt;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (target_size <= pts[i]->expected_size) {
            const double lo = pts[i - 1]->expected_size;
            const double hi = pts[i]->expected_size;
            if (hi == lo) return pts[i]->edf;
            const double w = (target_size - lo) / (hi - lo);
            return (1.0 - w) * pts[i - 1]->edf + w * pts[i]->edf;
        }
    }
    return pts.back()->edf;
}

}  // namespace riselect
