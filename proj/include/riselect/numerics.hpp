#pragma once

#include "riselect/types.hpp"

namespace riselect {

/// Reduced SVD X = U S V^T keeping only singular values above the rank cut.
struct ReducedSvd {
    Matrix left;             // n x r
    Vector singular_values;  // r, descending, all > 0
    Matrix right;            // p x r
    Index rank = 0;
};

/// Default relative rank tolerance for an n x p matrix.
inline double default_rank_tol(Index n, Index p) {
    return 1e-10 * static_cast<double>(std::max(n, p));
}

/// Thin SVD with rank = #\{sigma_i > rank_tol * sigma_max\}.
/// Throws ConvergenceFailure if the factorization does not converge.
ReducedSvd reduced_svd(const Matrix& x, double rank_tol);

/// Symmetric M with M (X^T X) M = I. Requires full column rank; throws
/// RankDeficient otherwise (callers fall back to the SVD route).
Matrix inv_sqrt_gram(const Matrix& x);

/// Least squares on the given columns. Throws RankDeficient when the
/// submatrix is column-rank-deficient.
CoefficientVector least_squares(const Matrix& x_sub, const Vector& y);

/// Minimum-norm least squares via the pseudo-inverse; always defined.
CoefficientVector least_squares_min_norm(const Matrix& x_sub, const Vector& y, double rank_tol);

/// Solves (X^T X + lambda I) b = X^T y. Requires lambda > 0.
CoefficientVector ridge_solve(const Matrix& x_sub, const Vector& y, double lambda);

/// Squared norm of the projection of y onto the column space of x_sub.
/// Empty subsets give 0; rank-deficient subsets use the SVD projection.
double r_squared(const Matrix& x_sub, const Vector& y);

/// Workspace for repeated projection-R^2 evaluations over column subsets
/// of one fixed dataset. Precomputes the Gram matrix G = X^T X and
/// c = X^T y; per subset, R^2 = c_S^T G_SS^+ c_S.
class SubsetRSquared {
public:
    SubsetRSquared(const Matrix& x, const Vector& y);

    /// R^2 of the subset; `indices` need not be sorted. Also returns the
    /// LS (or min-norm, if collinear) coefficients when `coef` is given.
    double operator()(const std::vector<int>& indices, Vector* coef = nullptr) const;

    const Matrix& gram() const { return gram_; }
    const Vector& xty() const { return xty_; }

private:
    Matrix gram_;
    Vector xty_;
};

}  // namespace riselect
