#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace solfv {

/// Uniform cell-centered 1D mesh.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_cells = 0;
    double dx = 0.0;

    double cell_center(std::size_t i) const {
        return x_min + (static_cast<double>(i) + 0.5) * dx;
    }
};

/// Limiter obstacle occupying [lo, hi]. two_sided selects the smooth flux
/// cutoff alpha and the per-cell side sign used by the two-sided penalty.
struct LimiterSpec {
    double lo = 0.0;
    double hi = 0.0;
    bool two_sided = false;
};

/// Per-cell region data. chi is 1 on limiter cells and 0 elsewhere; alpha is
/// the smooth flux cutoff (1 wherever chi = 0); side_sign is sign(-x).
struct RegionMask {
    std::vector<double> chi;
    std::vector<double> alpha;
    std::vector<double> side_sign;
    bool two_sided = false;

    bool has_limiter() const;
};

/// Cell-averaged (N, Gamma) state at one time level. N must stay positive.
struct FieldState {
    double t = 0.0;
    std::vector<double> N;
    std::vector<double> Gamma;

    double M(std::size_t i) const { return Gamma[i] / N[i]; }
    std::size_t size() const { return N.size(); }
};

/// Smooth flux cutoff for the two-sided limiter geometry: 0 on |x| <= 0.015,
/// 1 on |x| >= 0.075, and an even, monotone tanh step in between with
/// alpha(+-0.045) = 1/2 exactly.
double alpha_cutoff(double x);

struct GridBuildResult {
    Grid1D grid;
    RegionMask mask;
};

/// Builds the mesh and classifies cells by center. chi = 1 exactly on cells
/// whose centers lie strictly inside (limiter.lo, limiter.hi). Passing no
/// limiter yields chi identically 0 (pure-plasma domain). Throws
/// std::invalid_argument on a malformed domain, a limiter interval outside
/// the domain, a specified limiter containing no cell center, or a limiter
/// covering every cell.
GridBuildResult build_grid(double x_min, double x_max, std::size_t n_cells,
                           std::optional<LimiterSpec> limiter);

/// Throws std::invalid_argument if N has a nonpositive entry or any field
/// entry is non-finite.
void validate_state(const FieldState& state);

}  // namespace solfv
