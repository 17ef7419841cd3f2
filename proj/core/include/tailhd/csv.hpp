// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <string>
#include <vector>

#include "tailhd/types.hpp"

namespace tailhd {

// Reads a numeric CSV into a point cloud, one row per point. A first line
// that fails to parse as numbers is treated as a header and skipped.
// Throws DataError with a 1-based line number on malformed rows.
PointCloud read_point_cloud_csv(const std::string& path);
PointCloud parse_point_cloud_csv(const std::string& text, const std::string& origin);

// Shortest round-trip decimal form, identical across runs and platforms.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Writes header + rows. All numbers via format_double, '\n' line endings,
// so a rerun with identical inputs produces identical bytes.
std::string serialize_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

void write_text_file(const std::string& path, const std::string& content);

// "a,b,c" -> vector; "a,b;c,d" -> matrix rows. Throws ConfigError on junk.
Eigen::VectorXd parse_vector(const std::string& text);
Eigen::MatrixXd parse_matrix_rows(const std::string& text);
std::string serialize_vector(const Eigen::VectorXd& v);
std::string serialize_matrix_rows(const Eigen::MatrixXd& m);

}  // namespace tailhd
