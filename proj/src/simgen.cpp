#include "riselect/simgen.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "riselect/errors.hpp"

namespace riselect {

std::string to_string(Setting s) {
    switch (s) {
        case Setting::Low: return "low";
        case Setting::Medium: return "medium";
        case Setting::High50: return "high50";
        case Setting::High100: return "high100";
        case Setting::Custom: return "custom";
    }
    return "?";
}

Setting setting_from_string(const std::string& s) {
    if (s == "low") return Setting::Low;
    if (s == "medium") return Setting::Medium;
    if (s == "high50" || s == "high-50") return Setting::High50;
    if (s == "high100" || s == "high-100") return Setting::High100;
    if (s == "custom") return Setting::Custom;
    throw ConfigError("unknown setting: " + s);
}

SettingDims setting_dims(Setting s) {
    switch (s) {
        case Setting::Low: return {100, 10};
        case Setting::Medium: return {500, 100};
        case Setting::High50: return {50, 1000};
        case Setting::High100: return {100, 1000};
        case Setting::Custom: break;
    }
    throw ConfigError("custom setting has no fixed dimensions");
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

namespace {

// Repeated index of the suppressor coordinate (x4) in Examples 2 and 3.
constexpr int kSuppressor = 3;
// The weak, uncorrelated coordinate (x5) in Example 3.
constexpr int kWeak = 4;

void check_rho_interval(double rho) {
    if (rho < 0.0 || rho >= 1.0)
        throw ConfigError("rho must lie in [0, 1), got " + format_g(rho));
}

}  // namespace

Matrix build_sigma(const CovarianceSpec& spec) {
    const int p = spec.p;
    const double rho = spec.rho;
    if (p < 1) throw ConfigError("covariance needs p >= 1");
    Matrix sigma(p, p);

    switch (spec.kind) {
        case CovKind::Equicorrelated:
            check_rho_interval(rho);
            sigma.setConstant(rho);
            break;
        case CovKind::SuppressorEqui:
        case CovKind::SuppressorPlusWeak: {
            if (rho < 0.0 || rho >= 1.0)
                throw ConfigError("suppressor design needs rho in [0, 1)");
            if (p <= kSuppressor)
                throw ConfigError("suppressor design needs p > 4");
            sigma.setConstant(rho);
            const double root = std::sqrt(rho);
            sigma.row(kSuppressor).setConstant(root);
            sigma.col(kSuppressor).setConstant(root);
            if (spec.kind == CovKind::SuppressorPlusWeak) {
                if (p <= kWeak) throw ConfigError("weak-predictor design needs p > 5");
                sigma.row(kWeak).setZero();
                sigma.col(kWeak).setZero();
            }
            break;
        }
        case CovKind::Ar1:
            check_rho_interval(rho);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
            break;
    }
    sigma.diagonal().setOnes();

    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw NotPositiveSemidefinite("Cholesky failed at rho = " + format_g(rho));
    return sigma;
}

std::vector<int> spread_indices(int p, int s) {
    if (s < 2) throw PatternInfeasible("spread pattern needs s >= 2");
    std::vector<int> idx(s);
    for (int i = 1; i <= s; ++i) {
        const double pos = 1.0 + static_cast<double>(i - 1) * (p - 1) / (s - 1);
        idx[i - 1] = static_cast<int>(std::lround(pos)) - 1;
    }
    for (int i = 1; i < s; ++i)
        if (idx[i] == idx[i - 1])
            throw PatternInfeasible("spread pattern collides at p = " + std::to_string(p) +
                                    ", s = " + std::to_string(s));
    return idx;
}

CoefficientVector build_beta(const BetaPattern& pattern, double rho) {
    const int p = pattern.p;
    const int s = pattern.s;
    if (s > p) throw PatternInfeasible("s exceeds p");
    if (s < 1) throw PatternInfeasible("s must be >= 1");
    Vector beta = Vector::Zero(p);

    switch (pattern.kind) {
        case BetaKind::Ex1Strong:
            beta.head(s).setConstant(5.0);
            break;
        case BetaKind::Ex2Suppressor:
            if (rho <= 0.0) throw PatternInfeasible("suppressor coefficient vanishes at rho = 0");
            if (s < 2) throw PatternInfeasible("suppressor pattern needs s >= 2");
            beta.head(s - 1).setConstant(5.0);
            beta[s - 1] = -15.0 * std::sqrt(rho);
            break;
        case BetaKind::Ex3SuppressorWeak:
            if (rho <= 0.0) throw PatternInfeasible("suppressor coefficient vanishes at rho = 0");
            if (s < 3) throw PatternInfeasible("suppressor+weak pattern needs s >= 3");
            beta.head(s - 2).setConstant(5.0);
            beta[s - 2] = -15.0 * std::sqrt(rho);
            beta[s - 1] = 1.0;
            break;
        case BetaKind::Ex4Spread:
            for (int i : spread_indices(p, s)) beta[i] = 1.0;
            break;
        case BetaKind::Ex5Block:
            beta.head(s).setOnes();
            break;
        case BetaKind::Ex6Decay:
            if (s < 2) throw PatternInfeasible("decay pattern needs s >= 2");
            for (int i = 1; i <= s; ++i)
                beta[i - 1] = 0.5 + (10.0 - 0.5) * (i - 1) / (s - 1);
            break;
    }
    return make_coefficients(std::move(beta));
}

MaterializedDesign materialize(const SimDesign& design) {
    MaterializedDesign md;
    md.design = design;
    md.sigma = build_sigma(design.cov);
    md.beta0 = build_beta(design.beta, design.cov.rho).values;
    md.chol_lower = Eigen::LLT<Matrix>(md.sigma).matrixL();
    return md;
}

namespace {

CovKind cov_kind_for_example(int example) {
    switch (example) {
        case 1: return CovKind::Equicorrelated;
        case 2: return CovKind::SuppressorEqui;
        case 3: return CovKind::SuppressorPlusWeak;
        case 4:
        case 5:
        case 6: return CovKind::Ar1;
        default: throw ConfigError("example must be 1..6");
    }
}

BetaKind beta_kind_for_example(int example) {
    switch (example) {
        case 1: return BetaKind::Ex1Strong;
        case 2: return BetaKind::Ex2Suppressor;
        case 3: return BetaKind::Ex3SuppressorWeak;
        case 4: return BetaKind::Ex4Spread;
        case 5: return BetaKind::Ex5Block;
        case 6: return BetaKind::Ex6Decay;
        default: throw ConfigError("example must be 1..6");
    }
}

double derive_sigma2(const Matrix& sigma, const Vector& beta0, double snr) {
    if (snr <= 0.0) throw ConfigError("snr must be > 0");
    const double signal = beta0.dot(sigma * beta0);
    if (signal <= 0.0) throw ConfigError("signal variance is zero; check the beta pattern");
    return signal / snr;
}

SimDesign finish_design(SimDesign d) {
    Matrix sigma = build_sigma(d.cov);
    Vector beta0 = build_beta(d.beta, d.cov.rho).values;
    d.sigma2 = derive_sigma2(sigma, beta0, d.snr);
    return d;
}

}  // namespace

int default_sparsity(Part part, Setting setting, int example) {
    if (part == Part::PartI) {
        switch (example) {
            case 1: return 3;
            case 2: return 4;
            case 3: return 5;
            default: throw ConfigError("Part I uses examples 1..3");
        }
    }
    if (example < 4 || example > 6) throw ConfigError("Part II uses examples 4..6");
    return setting == Setting::High100 ? 10 : 5;
}

SimDesign make_design(Part part, Setting setting, int example, double rho, double snr) {
    const SettingDims dims = setting_dims(setting);
    SimDesign d;
    d.cov = {cov_kind_for_example(example), dims.p, rho};
    d.beta = {beta_kind_for_example(example), dims.p, default_sparsity(part, setting, example)};
    d.n = dims.n;
    d.snr = snr;
    d.example = example;
    d.setting = setting;
    d.design_id = "ex" + std::to_string(example) + "_" + to_string(setting) + "_rho" +
                  format_g(rho) + "_snr" + format_g(snr);
    return finish_design(d);
}

SimDesign make_design_custom(int example, int n, int p, int s, double rho, double snr,
                             const std::string& id_prefix) {
    SimDesign d;
    d.cov = {cov_kind_for_example(example), p, rho};
    d.beta = {beta_kind_for_example(example), p, s};
    d.n = n;
    d.snr = snr;
    d.example = example;
    d.setting = Setting::Custom;
    d.design_id = id_prefix + "_ex" + std::to_string(example) + "_n" + std::to_string(n) + "_p" +
                  std::to_string(p) + "_s" + std::to_string(s) + "_rho" + format_g(rho) + "_snr" +
                  format_g(snr);
    return finish_design(d);
}

namespace {

constexpr std::uint64_t split_tag(Split split, bool noise) {
    return 2 * static_cast<std::uint64_t>(split) + (noise ? 1 : 0);
}

}  // namespace

RawData draw_split(const MaterializedDesign& md, const RngStream& stream, Split split,
                   int n_rows) {
    const int n = n_rows > 0 ? n_rows : md.design.n;
    const int p = md.design.cov.p;
    const RngStream xs = stream.derive(split_tag(split, false));
    const RngStream es = stream.derive(split_tag(split, true));

    RawData data;
    data.predictors.resize(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j)
            data.predictors(i, j) = xs.normal(static_cast<std::uint64_t>(i) * p + j);
    // rows become L z, i.e. N(0, Sigma)
    data.predictors = data.predictors * md.chol_lower.transpose();

    const double sd = std::sqrt(md.design.sigma2);
    data.response = data.predictors * md.beta0;
    for (int i = 0; i < n; ++i) data.response[i] += sd * es.normal(i);
    return data;
}

SimInstance draw_instance(const MaterializedDesign& md, const RngStream& stream) {
    SimInstance inst;
    inst.train = draw_split(md, stream, Split::Train);
    inst.validation = draw_split(md, stream, Split::Validation);
    inst.test = draw_split(md, stream, Split::Test);
    inst.beta0 = make_coefficients(md.beta0);
    inst.sigma2 = md.design.sigma2;
    inst.base_seed = stream.base_seed();
    inst.stream_id = stream.stream_id();
    return inst;
}

SimInstance draw_instance(const SimDesign& design, const RngStream& stream) {
    return draw_instance(materialize(design), stream);
}

std::vector<double> part2_snr_values() {
    std::vector<double> snr(10);
    const double lo = std::log(0.05);
    const double hi = std::log(6.0);
    for (int i = 0; i < 10; ++i) snr[i] = std::exp(lo + i * (hi - lo) / 9.0);
    return snr;
}

std::vector<SimDesign> design_grid(Part part, Setting setting) {
    const std::vector<int> examples =
        part == Part::PartI ? std::vector<int>{1, 2, 3} : std::vector<int>{4, 5, 6};
    const std::vector<double> rhos =
        part == Part::PartI ? part1_rho_values() : part2_rho_values();
    const std::vector<double> snrs =
        part == Part::PartI ? part1_snr_values() : part2_snr_values();

    std::vector<SimDesign> grid;
    grid.reserve(examples.size() * rhos.size() * snrs.size());
    for (int e : examples)
        for (double rho : rhos)
            for (double snr : snrs) grid.push_back(make_design(part, setting, e, rho, snr));
    return grid;
}

}  // namespace riselect
