#include "riselect/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "riselect/errors.hpp"

namespace riselect {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(fields[i]);
    }
    line += '\n';
    return line;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell.empty())
        throw IoError("empty cell at row " + std::to_string(row) + ", column " +
                      std::to_string(col + 1));
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
        throw IoError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                      ", column " + std::to_string(col + 1));
    return v;
}

}  // namespace

RawData read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw IoError(path + " is empty");
    const std::size_t n_cols = split_csv_row(line).size();
    if (n_cols < 2)
        throw IoError(path + " needs a response column plus at least one predictor");

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_row(line);
        if (cells.size() != n_cols)
            throw IoError(path + ": row " + std::to_string(row_no) + " has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(n_cols));
        std::vector<double> row(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) row[c] = parse_cell(cells[c], row_no, c);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw IoError(path + " needs at least two data rows");

    RawData data;
    data.response.resize(rows.size());
    data.predictors.resize(rows.size(), n_cols - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.response[static_cast<Index>(i)] = rows[i][0];
        for (std::size_t c = 1; c < n_cols; ++c)
            data.predictors(static_cast<Index>(i), static_cast<Index>(c - 1)) = rows[i][c];
    }
    return data;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace riselect
