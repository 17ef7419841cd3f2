// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tailhd/types.hpp"

namespace tailhd {

// Flat key=value configuration with INI-style [section] headers and '#'
// comments. Keys are stored as "section.key" ("" section for the preamble).
// Serialisation is canonical (sections and keys sorted) so identical configs
// always produce identical bytes.
class Config {
public:
    Config() = default;

    static Config parse_string(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    void set_double(const std::string& key, double value);
    void set_int(const std::string& key, std::int64_t value);

    /// Keys under "section." in sorted order.
    std::vector<std::string> keys(const std::string& section) const;

    /// Overlay: values in `other` win.
    void merge(const Config& other);

    std::string serialize() const;
    void save(const std::string& path) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

/// Split "a,b,c" into trimmed tokens; empty input gives an empty list.
std::vector<std::string> split_list(const std::string& s, char sep = ',');

}  // namespace tailhd
