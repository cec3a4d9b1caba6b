#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wavemaps/grid.hpp"

namespace wavemaps {

using Json = nlohmann::ordered_json;

// 17 significant digits, enough to round-trip a double
std::string format_double(double x);

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

    Csv& row(const std::vector<std::string>& cells);
    Csv& row(const std::vector<double>& values);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

// write to a sibling temp file, then rename over the target
void write_atomic(const std::filesystem::path& path, const std::string& content);
void write_csv(const std::filesystem::path& path, const Csv& csv);
void write_json(const std::filesystem::path& path, const Json& j);

Csv field_csv(const Field1D& f);
// row-major over (u, v)
Csv field_csv(const Field2D& F);

std::string read_file(const std::filesystem::path& path);

}  // namespace wavemaps
