#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "solfv/cases.hpp"

namespace solfv::testing {

/// Whole file as bytes; throws when the file cannot be read.
inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

/// Parsed CSV with a header row. The writers never quote or embed commas, so
/// a plain split is exact.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw std::runtime_error("CSV column not found: " + name);
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) table.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (!line.empty()) table.rows.push_back(split_csv_line(line));
    }
    return table;
}

/// Sixth-order central first derivative, h small against the window but
/// large enough that roundoff stays far below the residual tolerance.
inline double fd6(const std::function<double(double)>& f, double x, double h) {
    return (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) +
            45.0 * f(x + h) - 9.0 * f(x + 2.0 * h) + f(x + 3.0 * h)) /
           (60.0 * h);
}

/// Max absolute residual of both balance laws,
///   dt N + dx Gamma - S_N  and  dt Gamma + dx (Gamma^2/N + N) - S_Gamma,
/// with all derivatives taken by finite differences of the case fields on an
/// nt x nx sample of [t0,t1] x [x0,x1]. A manufactured case must drive this
/// to roundoff wherever its sources are active.
inline double max_pde_residual(const ManufacturedCase& c, double t0, double t1,
                               double x0, double x1, std::size_t nt,
                               std::size_t nx, double h = 1e-4) {
    double worst = 0.0;
    for (std::size_t it = 0; it < nt; ++it) {
        const double t =
            t0 + (t1 - t0) * static_cast<double>(it) / static_cast<double>(nt - 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = x0 + (x1 - x0) * static_cast<double>(ix) /
                                      static_cast<double>(nx - 1);
            const auto momentum_flux = [&](double xx) {
                const double N = c.N_exact(t, xx);
                const double G = c.Gamma_exact(t, xx);
                return G * G / N + N;
            };
            const double r_N =
                fd6([&](double tt) { return c.N_exact(tt, x); }, t, h) +
                fd6([&](double xx) { return c.Gamma_exact(t, xx); }, x, h) -
                c.S_N(t, x);
            const double r_G =
                fd6([&](double tt) { return c.Gamma_exact(tt, x); }, t, h) +
                fd6(momentum_flux, x, h) - c.S_Gamma(t, x);
            worst = std::max({worst, std::abs(r_N), std::abs(r_G)});
        }
    }
    return worst;
}

}  // namespace solfv::testing
