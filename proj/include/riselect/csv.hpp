#pragma once

#include <string>
#include <vector>

#include "riselect/types.hpp"

namespace riselect {

/// Shortest-faithful decimal form: %.17g.
std::string format_full(double v);

/// RFC-4180 field escaping (quotes only when the field needs it).
std::string csv_escape(const std::string& field);

std::string csv_line(const std::vector<std::string>& fields);

/// Loads a dataset CSV: header row, first column response, remaining
/// columns predictors, numeric cells, no missing values.
RawData read_dataset_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace riselect
