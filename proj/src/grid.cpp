#include "solfv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace solfv {

bool RegionMask::has_limiter() const {
    return std::any_of(chi.begin(), chi.end(), [](double c) { return c != 0.0; });
}

double alpha_cutoff(double x) {
    const double s = std::abs(x);
    if (s <= 0.015) {
        return 0.0;
    }
    if (s >= 0.075) {
        return 1.0;
    }
    // Even smooth step: the argument runs to -inf as s -> 0.015 and +inf as
    // s -> 0.075, so alpha is continuous against both constant branches.
    return 0.5 + 0.5 * std::tanh(0.060 * (1.0 / (0.075 - s) - 1.0 / (s - 0.015)));
}

GridBuildResult build_grid(double x_min, double x_max, std::size_t n_cells,
                           std::optional<LimiterSpec> limiter) {
    if (!(x_min < x_max)) {
        throw std::invalid_argument("build_grid: x_min must be less than x_max");
    }
    if (n_cells < 4) {
        throw std::invalid_argument("build_grid: at least 4 cells required");
    }

    Grid1D grid;
    grid.x_min = x_min;
    grid.x_max = x_max;
    grid.n_cells = n_cells;
    grid.dx = (x_max - x_min) / static_cast<double>(n_cells);

    RegionMask mask;
    mask.chi.assign(n_cells, 0.0);
    mask.alpha.assign(n_cells, 1.0);
    mask.side_sign.assign(n_cells, 1.0);
    mask.two_sided = limiter && limiter->two_sided;

    if (limiter) {
        if (!(limiter->lo < limiter->hi)) {
            throw std::invalid_argument("build_grid: limiter interval is empty");
        }
        if (limiter->lo < x_min || limiter->hi > x_max) {
            throw std::invalid_argument("build_grid: limiter interval outside domain");
        }
    }

    std::size_t n_limiter = 0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double x = grid.cell_center(i);
        mask.side_sign[i] = (x < 0.0) ? 1.0 : -1.0;
        if (limiter && x > limiter->lo && x < limiter->hi) {
            mask.chi[i] = 1.0;
            ++n_limiter;
            if (mask.two_sided) {
                mask.alpha[i] = alpha_cutoff(x);
            }
        }
    }

    if (limiter && n_limiter == 0) {
        throw std::invalid_argument("build_grid: limiter contains no cell center");
    }
    if (n_limiter == n_cells) {
        throw std::invalid_argument("build_grid: limiter covers the whole domain");
    }

    return {grid, mask};
}

void validate_state(const FieldState& state) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!(state.N[i] > 0.0)) {
            throw std::invalid_argument("state: nonpositive density in cell " +
                                        std::to_string(i));
        }
        if (!std::isfinite(state.N[i]) || !std::isfinite(state.Gamma[i])) {
            throw std::invalid_argument("state: non-finite value in cell " +
                                        std::to_string(i));
        }
    }
}

}  // namespace solfv
