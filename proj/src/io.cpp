#include "wavemaps/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "wavemaps/error.hpp"

namespace wavemaps {

namespace fs = std::filesystem;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Csv& Csv::row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw Error("csv row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(header_.size()));
    std::string line;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) line += ',';
        line += cells[k];
    }
    rows_.push_back(std::move(line));
    return *this;
}

Csv& Csv::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    return row(cells);
}

std::string Csv::str() const {
    std::string out;
    for (std::size_t k = 0; k < header_.size(); ++k) {
        if (k) out += ',';
        out += header_[k];
    }
    out += '\n';
    for (const auto& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw Error("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path);
}

void write_csv(const fs::path& path, const Csv& csv) { write_atomic(path, csv.str()); }

void write_json(const fs::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

Csv field_csv(const Field1D& f) {
    Csv c({"x", "value"});
    for (std::size_t j = 0; j < f.size(); ++j) c.row(std::vector<double>{f.grid.x(j), f.v[j]});
    return c;
}

Csv field_csv(const Field2D& F) {
    Csv c({"u", "v", "value"});
    for (std::size_t i = 0; i < F.rows(); ++i)
        for (std::size_t j = 0; j < F.cols(); ++j) c.row(std::vector<double>{F.gu.x(i), F.gv.x(j), F(i, j)});
    return c;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace wavemaps
