#pragma once

#include <stdexcept>
#include <string>

namespace riselect {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& where)
        : Error("non-finite value in " + where) {}
};

/// column is 0-based; -1 denotes the response.
class ConstantColumn : public Error {
public:
    explicit ConstantColumn(int column)
        : Error((column >= 0 ? "column " + std::to_string(column + 1) : std::string("response")) +
                " has zero variance"),
          column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& what = "matrix is rank deficient")
        : Error(what) {}
};

class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

class TooManyPredictors : public Error {
public:
    TooManyPredictors(int p, int max_p)
        : Error("p = " + std::to_string(p) + " exceeds limit " + std::to_string(max_p)) {}
};

class NonPositivePenalty : public Error {
public:
    explicit NonPositivePenalty(double lambda)
        : Error("ridge penalty must be > 0, got " + std::to_string(lambda)) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(double lambda)
        : Error("coordinate descent did not converge at lambda = " + std::to_string(lambda)),
          lambda_(lambda) {}
    double lambda() const { return lambda_; }

private:
    double lambda_;
};

class NotPositiveSemidefinite : public Error {
public:
    explicit NotPositiveSemidefinite(const std::string& what)
        : Error("covariance is not positive semidefinite: " + what) {}
};

class PatternInfeasible : public Error {
public:
    explicit PatternInfeasible(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace riselect
