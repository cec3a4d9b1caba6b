#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "wavemaps/error.hpp"

namespace wavemaps {

// Periodic grid x_j = -L + j h on [-L, L), frequencies xi_k = pi k / L.
class Grid1D {
public:
    Grid1D(std::size_t n, double half_length);

    std::size_t size() const { return n_; }
    double half_length() const { return L_; }
    double h() const { return 2.0 * L_ / static_cast<double>(n_); }
    double x(std::size_t j) const { return -L_ + static_cast<double>(j) * h(); }
    double freq(double k) const { return std::numbers::pi * k / L_; }
    double nyquist() const { return freq(static_cast<double>(n_ / 2)); }
    // index of x = 0
    std::size_t origin() const { return n_ / 2; }
    // largest dyadic N with N <= nyquist / 4
    double max_scale() const;
    std::vector<double> scales() const;
    std::vector<double> points() const;

    bool operator==(const Grid1D&) const = default;

private:
    std::size_t n_;
    double L_;
};

struct Field1D {
    Grid1D grid;
    std::vector<double> v;

    explicit Field1D(Grid1D g) : grid(g), v(g.size(), 0.0) {}
    Field1D(Grid1D g, std::vector<double> values);
    template <class F>
    static Field1D from(Grid1D g, F&& f) {
        Field1D out(g);
        for (std::size_t j = 0; j < g.size(); ++j) out.v[j] = f(g.x(j));
        return out;
    }

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t j) { return v[j]; }
    double operator[](std::size_t j) const { return v[j]; }
    double sup() const;

    Field1D& operator+=(const Field1D& o);
    Field1D& operator-=(const Field1D& o);
    Field1D& operator*=(double a);
};

Field1D operator+(Field1D a, const Field1D& b);
Field1D operator-(Field1D a, const Field1D& b);
Field1D operator*(double a, Field1D f);
Field1D operator*(const Field1D& a, const Field1D& b);

// rows index u, columns index v
struct Field2D {
    Grid1D gu, gv;
    std::vector<double> v;

    Field2D(Grid1D u, Grid1D w) : gu(u), gv(w), v(u.size() * w.size(), 0.0) {}
    explicit Field2D(Grid1D g) : Field2D(g, g) {}
    template <class F>
    static Field2D from(Grid1D u, Grid1D w, F&& f) {
        Field2D out(u, w);
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) out(i, j) = f(u.x(i), w.x(j));
        return out;
    }

    std::size_t rows() const { return gu.size(); }
    std::size_t cols() const { return gv.size(); }
    double& operator()(std::size_t i, std::size_t j) { return v[i * gv.size() + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v[i * gv.size() + j]; }
    std::span<double> row(std::size_t i) { return {v.data() + i * gv.size(), gv.size()}; }
    std::span<const double> row(std::size_t i) const { return {v.data() + i * gv.size(), gv.size()}; }
    double sup() const;
    bool square() const { return gu == gv; }

    Field2D& operator+=(const Field2D& o);
    Field2D& operator-=(const Field2D& o);
    Field2D& operator*=(double a);
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double a, Field2D f);

void require_same(const Grid1D& a, const Grid1D& b, const char* what);

}  // namespace wavemaps
