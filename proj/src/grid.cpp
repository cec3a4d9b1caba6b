#include "wavemaps/grid.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace wavemaps {

Grid1D::Grid1D(std::size_t n, double half_length) : n_(n), L_(half_length) {
    if (n < 8 || !std::has_single_bit(n))
        throw Error("grid size must be a power of two >= 8, got " + std::to_string(n));
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw Error("grid half length must be positive");
}

double Grid1D::max_scale() const {
    double N = 1.0;
    while (2.0 * N <= nyquist() / 4.0) N *= 2.0;
    return N;
}

std::vector<double> Grid1D::scales() const {
    std::vector<double> out;
    for (double N = 1.0; N <= max_scale(); N *= 2.0) out.push_back(N);
    return out;
}

std::vector<double> Grid1D::points() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
    return out;
}

void require_same(const Grid1D& a, const Grid1D& b, const char* what) {
    if (!(a == b)) throw GridMismatch(std::string(what) + ": grids differ");
}

Field1D::Field1D(Grid1D g, std::vector<double> values) : grid(g), v(std::move(values)) {
    if (v.size() != grid.size()) throw GridMismatch("sample count does not match grid");
}

double Field1D::sup() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

Field1D& Field1D::operator+=(const Field1D& o) {
    require_same(grid, o.grid, "Field1D +");
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += o.v[j];
    return *this;
}

Field1D& Field1D::operator-=(const Field1D& o) {
    require_same(grid, o.grid, "Field1D -");
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= o.v[j];
    return *this;
}

Field1D& Field1D::operator*=(double a) {
    for (double& x : v) x *= a;
    return *this;
}

Field1D operator+(Field1D a, const Field1D& b) { return a += b; }
Field1D operator-(Field1D a, const Field1D& b) { return a -= b; }
Field1D operator*(double a, Field1D f) { return f *= a; }

Field1D operator*(const Field1D& a, const Field1D& b) {
    require_same(a.grid, b.grid, "Field1D *");
    Field1D out(a.grid);
    for (std::size_t j = 0; j < a.size(); ++j) out.v[j] = a.v[j] * b.v[j];
    return out;
}

double Field2D::sup() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

Field2D& Field2D::operator+=(const Field2D& o) {
    require_same(gu, o.gu, "Field2D +");
    require_same(gv, o.gv, "Field2D +");
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += o.v[j];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& o) {
    require_same(gu, o.gu, "Field2D -");
    require_same(gv, o.gv, "Field2D -");
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= o.v[j];
    return *this;
}

Field2D& Field2D::operator*=(double a) {
    for (double& x : v) x *= a;
    return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double a, Field2D f) { return f *= a; }

}  // namespace wavemaps
