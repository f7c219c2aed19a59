#include "riselect/standardize.hpp"

#include "riselect/errors.hpp"

namespace riselect {

namespace {

// Centers v in place and returns its centered norm; throws if the norm
// vanishes (constant input).
double center_to_unit_norm(Vector& v, int column_for_error) {
    const double mean = v.mean();
    v.array() -= mean;
    const double norm = v.norm();
    if (norm == 0.0) throw ConstantColumn(column_for_error);
    v /= norm;
    return norm;
}

}  // namespace

Dataset standardize(const RawData& raw) {
    if (raw.n() < 2 || raw.p() < 1)
        throw DimensionMismatch("standardize requires n >= 2 and p >= 1");
    if (!raw.predictors.allFinite()) throw NonFinite("predictor matrix");
    if (!raw.response.allFinite()) throw NonFinite("response vector");

    Dataset ds;
    ds.predictors = raw.predictors;
    ds.response = raw.response;
    ds.centers_x = Vector(raw.p());
    ds.scales_x = Vector(raw.p());

    for (Index j = 0; j < raw.p(); ++j) {
        Vector col = ds.predictors.col(j);
        ds.centers_x[j] = col.mean();
        ds.scales_x[j] = center_to_unit_norm(col, static_cast<int>(j));
        ds.predictors.col(j) = col;
    }
    ds.center_y = ds.response.mean();
    Vector y = ds.response;
    ds.scale_y = center_to_unit_norm(y, -1);
    ds.response = y;
    return ds;
}

}  // namespace riselect
