#include "riselect/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "riselect/errors.hpp"

namespace riselect {

ReducedSvd reduced_svd(const Matrix& x, double rank_tol) {
    if (!x.allFinite()) throw NonFinite("reduced_svd input");
    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw ConvergenceFailure("SVD did not converge");

    const Vector& sv = svd.singularValues();
    const double cut = rank_tol * (sv.size() > 0 ? sv[0] : 0.0);
    Index r = 0;
    while (r < sv.size() && sv[r] > cut) ++r;

    ReducedSvd out;
    out.left = svd.matrixU().leftCols(r);
    out.singular_values = sv.head(r);
    out.right = svd.matrixV().leftCols(r);
    out.rank = r;
    return out;
}

Matrix inv_sqrt_gram(const Matrix& x) {
    const Index p = x.cols();
    Matrix gram = x.transpose() * x;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw ConvergenceFailure("eigendecomposition failed");
    const Vector& ev = eig.eigenvalues();  // ascending
    const double cut = default_rank_tol(x.rows(), p) * ev[p - 1];
    if (ev[0] <= cut) throw RankDeficient("X^T X is singular; use the SVD route");
    Vector inv_sqrt = ev.array().rsqrt();
    return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

CoefficientVector least_squares(const Matrix& x_sub, const Vector& y) {
    if (x_sub.cols() == 0) return CoefficientVector::zeros(0);
    Eigen::ColPivHouseholderQR<Matrix> qr(x_sub);
    if (qr.rank() < x_sub.cols()) throw RankDeficient("least_squares: collinear columns");
    return make_coefficients(qr.solve(y));
}

CoefficientVector least_squares_min_norm(const Matrix& x_sub, const Vector& y, double rank_tol) {
    if (x_sub.cols() == 0) return CoefficientVector::zeros(0);
    ReducedSvd svd = reduced_svd(x_sub, rank_tol);
    Vector b = svd.right *
               (svd.left.transpose() * y).cwiseQuotient(svd.singular_values);
    return make_coefficients(std::move(b));
}

CoefficientVector ridge_solve(const Matrix& x_sub, const Vector& y, double lambda) {
    if (lambda <= 0.0) throw NonPositivePenalty(lambda);
    const Index k = x_sub.cols();
    if (k == 0) return CoefficientVector::zeros(0);
    Matrix a = x_sub.transpose() * x_sub;
    a.diagonal().array() += lambda;
    Vector b = a.ldlt().solve(x_sub.transpose() * y);
    return make_coefficients(std::move(b));
}

double r_squared(const Matrix& x_sub, const Vector& y) {
    if (x_sub.cols() == 0) return 0.0;
    ReducedSvd svd = reduced_svd(x_sub, default_rank_tol(x_sub.rows(), x_sub.cols()));
    return (svd.left.transpose() * y).squaredNorm();
}

SubsetRSquared::SubsetRSquared(const Matrix& x, const Vector& y)
    : gram_(x.transpose() * x), xty_(x.transpose() * y) {}

double SubsetRSquared::operator()(const std::vector<int>& indices, Vector* coef) const {
    const int k = static_cast<int>(indices.size());
    if (k == 0) {
        if (coef) coef->resize(0);
        return 0.0;
    }
    Matrix g(k, k);
    Vector c(k);
    for (int a = 0; a < k; ++a) {
        c[a] = xty_[indices[a]];
        for (int b = 0; b < k; ++b) g(a, b) = gram_(indices[a], indices[b]);
    }
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() == Eigen::Success) {
        Vector beta = llt.solve(c);
        // LLT succeeds numerically on some near-singular subsets; accept
        // only if the solve actually holds.
        if ((g * beta - c).norm() <= 1e-8 * (c.norm() + 1.0)) {
            if (coef) *coef = beta;
            return c.dot(beta);
        }
    }
    // Collinear subset: projection through the pseudo-inverse of G.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
    const Vector& ev = eig.eigenvalues();
    const double cut = 1e-12 * std::max(ev[k - 1], 0.0) * k + 1e-300;
    Vector inv = (ev.array() > cut).select(ev.array().inverse(), 0.0);
    Vector beta = eig.eigenvectors() * (inv.asDiagonal() * (eig.eigenvectors().transpose() * c));
    if (coef) *coef = beta;
    return c.dot(beta);
}

}  // namespace riselect
