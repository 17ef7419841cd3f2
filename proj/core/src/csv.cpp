// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tailhd/config.hpp"

namespace tailhd {

namespace {

bool parse_cell(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) --last;
    if (first == last) return false;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

PointCloud parse_point_cloud_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    std::size_t dim = 0;
    int lineno = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char ch : line)
            if (ch != ' ' && ch != '\t') { blank = false; break; }
        if (blank) continue;
        const auto cells = split_cells(line);
        std::vector<double> row(cells.size());
        bool ok = true;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!parse_cell(cells[i], row[i])) { ok = false; break; }
        if (!ok) {
            if (first_content_line) {  // header
                first_content_line = false;
                continue;
            }
            throw DataError(origin + ": line " + std::to_string(lineno) + ": non-numeric cell");
        }
        first_content_line = false;
        if (dim == 0) dim = row.size();
        if (row.size() != dim)
            throw DataError(origin + ": line " + std::to_string(lineno) + ": expected " +
                            std::to_string(dim) + " columns, got " + std::to_string(row.size()));
        // Non-finite cells are allowed here (series files carry nan for
        // undefined transforms); PointCloud::validate() rejects them where
        // finite coordinates are required.
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(origin + ": no data rows");
    PointCloud cloud;
    cloud.pts.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            cloud.pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return cloud;
}

PointCloud read_point_cloud_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_point_cloud_csv(ss.str(), path);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // normalize -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string serialize_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
    write_text_file(path, serialize_csv(table));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

Eigen::VectorXd parse_vector(const std::string& text) {
    const auto toks = split_list(text);
    Eigen::VectorXd v(static_cast<Eigen::Index>(toks.size()));
    for (std::size_t i = 0; i < toks.size(); ++i) {
        try {
            v(static_cast<Eigen::Index>(i)) = std::stod(toks[i]);
        } catch (const std::exception&) {
            throw ConfigError("malformed vector entry: " + toks[i]);
        }
    }
    return v;
}

Eigen::MatrixXd parse_matrix_rows(const std::string& text) {
    const auto rows = split_list(text, ';');
    if (rows.empty()) throw ConfigError("empty matrix");
    Eigen::MatrixXd m;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Eigen::VectorXd row = parse_vector(rows[r]);
        if (r == 0)
            m.resize(static_cast<Eigen::Index>(rows.size()), row.size());
        else if (row.size() != m.cols())
            throw ConfigError("ragged matrix rows");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

std::string serialize_vector(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v(i));
    }
    return out;
}

std::string serialize_matrix_rows(const Eigen::MatrixXd& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out += ";";
        out += serialize_vector(m.row(r).transpose());
    }
    return out;
}

}  // namespace tailhd
