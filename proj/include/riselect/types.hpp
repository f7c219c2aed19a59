#pragma once

#include <Eigen/Core>
#include <vector>

namespace riselect {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Predictors and response on their original scale.
struct RawData {
    Matrix predictors;  // n x p
    Vector response;    // n

    Index n() const { return predictors.rows(); }
    Index p() const { return predictors.cols(); }
};

/// Standardized data: every predictor column and the response have zero
/// mean and unit l2-norm. The centers and pre-standardization norms are
/// kept so fits can be mapped back to the original scale.
struct Dataset {
    Matrix predictors;  // n x p
    Vector response;    // n
    Vector centers_x;   // p
    Vector scales_x;    // p, the centered column norms
    double center_y = 0.0;
    double scale_y = 1.0;

    Index n() const { return predictors.rows(); }
    Index p() const { return predictors.cols(); }
};

/// Dense coefficient vector plus its support (indices of nonzeros, ascending).
struct CoefficientVector {
    Vector values;
    std::vector<int> support;

    static CoefficientVector zeros(Index p) {
        CoefficientVector c;
        c.values = Vector::Zero(p);
        return c;
    }

    /// Rebuild support as exactly { i : values[i] != 0 }.
    void refresh_support() {
        support.clear();
        for (Index i = 0; i < values.size(); ++i)
            if (values[i] != 0.0) support.push_back(static_cast<int>(i));
    }
};

inline CoefficientVector make_coefficients(Vector values) {
    CoefficientVector out;
    out.values = std::move(values);
    out.refresh_support();
    return out;
}

/// Ordered set of distinct predictor indices (0-based internally).
struct ActiveSet {
    std::vector<int> indices;

    std::size_t size() const { return indices.size(); }
    bool contains(int j) const {
        for (int i : indices)
            if (i == j) return true;
        return false;
    }
};

}  // namespace riselect
