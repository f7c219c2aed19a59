#pragma once

#include <string>
#include <vector>

#include "riselect/rng.hpp"
#include "riselect/types.hpp"

namespace riselect {

enum class CovKind { Equicorrelated, SuppressorEqui, SuppressorPlusWeak, Ar1 };
enum class BetaKind { Ex1Strong, Ex2Suppressor, Ex3SuppressorWeak, Ex4Spread, Ex5Block, Ex6Decay };
enum class Part { PartI, PartII };
enum class Setting { Low, Medium, High50, High100, Custom };

std::string to_string(Setting s);
Setting setting_from_string(const std::string& s);

/// (n, p) for a problem setting.
struct SettingDims {
    int n;
    int p;
};
SettingDims setting_dims(Setting s);

struct CovarianceSpec {
    CovKind kind;
    int p;
    double rho;
};

struct BetaPattern {
    BetaKind kind;
    int p;
    int s;
};

/// One simulation cell: covariance, true coefficients and noise level.
struct SimDesign {
    CovarianceSpec cov;
    BetaPattern beta;
    int n = 0;
    double snr = 1.0;
    double sigma2 = 1.0;  // beta0' Sigma beta0 / snr
    std::string design_id;
    int example = 0;
    Setting setting = Setting::Low;
};

/// Independent train/validation/test draws from one design.
struct SimInstance {
    RawData train;
    RawData validation;
    RawData test;
    CoefficientVector beta0;
    double sigma2 = 1.0;
    std::uint64_t base_seed = 0;
    std::uint64_t stream_id = 0;
};

/// Dense covariance for the spec; validated PSD via Cholesky.
Matrix build_sigma(const CovarianceSpec& spec);

/// True coefficient vector; rho feeds the suppressor patterns.
CoefficientVector build_beta(const BetaPattern& pattern, double rho);

/// Design Sigma/beta0 with the Cholesky factor cached for sampling.
struct MaterializedDesign {
    SimDesign design;
    Matrix sigma;
    Vector beta0;
    Matrix chol_lower;
};

MaterializedDesign materialize(const SimDesign& design);

/// Assembles a design for the given part; derives sigma2 from the SNR.
SimDesign make_design(Part part, Setting setting, int example, double rho, double snr);

/// EDF-style design with explicit dimensions (Part II covariance/beta).
SimDesign make_design_custom(int example, int n, int p, int s, double rho, double snr,
                             const std::string& id_prefix);

enum class Split { Train, Validation, Test };

/// One split of a design, standard-normal rows mapped through the
/// Cholesky factor, noise sigma * N(0, I).
RawData draw_split(const MaterializedDesign& md, const RngStream& stream, Split split,
                   int n_rows = -1);

SimInstance draw_instance(const MaterializedDesign& md, const RngStream& stream);
SimInstance draw_instance(const SimDesign& design, const RngStream& stream);

/// Full factorial grid for one part and setting, in canonical order
/// (example, rho, snr).
std::vector<SimDesign> design_grid(Part part, Setting setting);

/// The ten Part II SNR values, log-spaced over [0.05, 6].
std::vector<double> part2_snr_values();

inline std::vector<double> part1_snr_values() { return {0.05, 0.25, 1.22, 6.0}; }
inline std::vector<double> part1_rho_values() { return {0.35, 0.7, 0.9}; }
inline std::vector<double> part2_rho_values() { return {0.0, 0.35, 0.7, 0.9}; }

/// sparsity for (part, setting, example)
int default_sparsity(Part part, Setting setting, int example);

/// 0-based indices of the Ex4 evenly spaced pattern.
std::vector<int> spread_indices(int p, int s);

std::string format_g(double v);

}  // namespace riselect
