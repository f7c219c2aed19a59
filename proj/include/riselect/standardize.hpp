#pragma once

#include "riselect/types.hpp"

namespace riselect {

/// Center each predictor column and the response to mean zero and scale
/// them to unit l2-norm. Throws NonFinite on NaN/Inf input and
/// ConstantColumn when a column (or the response) has zero variance.
Dataset standardize(const RawData& raw);

}  // namespace riselect
