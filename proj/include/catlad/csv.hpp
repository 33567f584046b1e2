#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/config.hpp"
#include "catlad/matrix.hpp"
#include "catlad/var_model.hpp"

namespace catlad {

// Shortest round-trip decimal form of a double; CSV output is bit-exact on
// re-read and byte-stable across runs.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Compact form for labels and legends.
inline std::string format_double_brief(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

inline double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("not a number in CSV: `" + s + "`");
    }
}

// Series file format: header `t,z1,...,zd`, then one row per step with the
// 1-based time index and full-precision values.
inline void write_time_series(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write: " + path);
    out << "t";
    for (const std::string& name : series.names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < series.values.rows(); ++i) {
        out << (i + 1);
        for (std::size_t j = 0; j < series.values.cols(); ++j)
            out << ',' << format_double(series.values(i, j));
        out << '\n';
    }
    if (!out) throw config_error("write failed: " + path);
}

inline TimeSeries read_time_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty series file: " + path);
    auto header = split(trim(line), ',');
    if (header.size() < 2 || trim(header[0]) != "t")
        throw config_error(path + ": expected header `t,z1,...`");
    TimeSeries series;
    for (std::size_t j = 1; j < header.size(); ++j) series.names.push_back(trim(header[j]));
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw config_error(path + ": row width differs from header");
        std::vector<double> row(series.names.size());
        for (std::size_t j = 1; j < cells.size(); ++j) row[j - 1] = parse_double(trim(cells[j]));
        rows.push_back(std::move(row));
    }
    series.values = Mat(rows.size(), series.names.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < series.names.size(); ++j) series.values(i, j) = rows[i][j];
    return series;
}

enum class IngestTransform { None, Diff, LogDiff };

inline IngestTransform parse_transform(const std::string& name) {
    if (name == "none") return IngestTransform::None;
    if (name == "diff") return IngestTransform::Diff;
    if (name == "logdiff") return IngestTransform::LogDiff;
    throw config_error("unknown transform: " + name + " (expected none, diff or logdiff)");
}

// Reads a headered numeric CSV into a series: optional column selection by
// name, then an optional per-column transform. `diff` takes first
// differences, `logdiff` differences of logs (data must be positive); both
// drop the first row.
inline TimeSeries ingest_csv(const std::string& path, const std::vector<std::string>& columns,
                             IngestTransform transform) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty file: " + path);
    auto header = split(trim(line), ',');
    for (std::string& h : header) h = trim(h);

    std::vector<std::size_t> keep;
    if (columns.empty()) {
        // Every column except a leading index column named `t`, if present.
        for (std::size_t j = 0; j < header.size(); ++j)
            if (!(j == 0 && header[j] == "t")) keep.push_back(j);
    } else {
        for (const std::string& want : columns) {
            auto it = std::find(header.begin(), header.end(), want);
            if (it == header.end()) throw config_error(path + ": no column named `" + want + "`");
            keep.push_back(static_cast<std::size_t>(it - header.begin()));
        }
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw config_error(path + ": row width differs from header");
        std::vector<double> row(keep.size());
        for (std::size_t j = 0; j < keep.size(); ++j) row[j] = parse_double(trim(cells[keep[j]]));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw config_error(path + ": no data rows");

    TimeSeries series;
    for (std::size_t j : keep) series.names.push_back(header[j]);

    if (transform == IngestTransform::None) {
        series.values = Mat(rows.size(), keep.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) series.values(i, j) = rows[i][j];
        return series;
    }
    if (rows.size() < 2) throw config_error(path + ": differencing needs at least 2 rows");
    if (transform == IngestTransform::LogDiff) {
        for (auto& row : rows)
            for (double& v : row) {
                if (!(v > 0.0)) throw config_error(path + ": logdiff needs positive values");
                v = std::log(v);
            }
    }
    series.values = Mat(rows.size() - 1, keep.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            series.values(i - 1, j) = rows[i][j] - rows[i - 1][j];
    return series;
}

// Minimal table writer for report CSVs: fixed header, rows of preformatted
// cells.
inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write: " + path);
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << row[j];
        }
        out << '\n';
    }
    if (!out) throw config_error("write failed: " + path);
}

}  // namespace catlad
