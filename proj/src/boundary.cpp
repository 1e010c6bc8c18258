#include "solfv/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace solfv {

std::pair<double, double> asymptotic_bc(double t, double x, double M0) {
    if (t < (x - 0.4) / M0) {
        const double d = x - t * M0;
        return {std::exp(-6.25 * d * d), M0};
    }
    return {std::exp(-1.0 / (t - (x - 0.4) / M0 + 1.0)), M0};
}

ExtendedState fill_ghosts(const FieldState& state, const Grid1D& grid,
                          const BoundaryCondition& bc, double t) {
    const std::size_t n = state.size();
    const std::size_t g = BoundaryCondition::ghost_depth;
    if (n != grid.n_cells) {
        throw std::invalid_argument("fill_ghosts: state/grid size mismatch");
    }
    if ((bc.left == BcKind::Periodic) != (bc.right == BcKind::Periodic)) {
        throw std::invalid_argument("fill_ghosts: periodic must be two-sided");
    }
    if (bc.left == BcKind::AsymptoticOutflow) {
        throw std::invalid_argument(
            "fill_ghosts: asymptotic outflow is a right-edge prescription");
    }
    if ((bc.left == BcKind::ExactDirichlet || bc.right == BcKind::ExactDirichlet) &&
        bc.dirichlet_case == nullptr) {
        throw std::invalid_argument("fill_ghosts: Dirichlet needs a case");
    }

    ExtendedState ext;
    ext.N.resize(n + 2 * g);
    ext.Gamma.resize(n + 2 * g);
    for (std::size_t i = 0; i < n; ++i) {
        ext.N[g + i] = state.N[i];
        ext.Gamma[g + i] = state.Gamma[i];
    }

    // Ghost centers: index g-1-k maps to x_min - (k + 1/2) dx,
    // index g+n+k to x_max + (k + 1/2) dx, k = 0..g-1.
    auto left_ghost_x = [&](std::size_t k) {
        return grid.x_min - (static_cast<double>(k) + 0.5) * grid.dx;
    };
    auto right_ghost_x = [&](std::size_t k) {
        return grid.x_max + (static_cast<double>(k) + 0.5) * grid.dx;
    };

    switch (bc.left) {
        case BcKind::Symmetry:
            // Mirror about x_min: N even, Gamma odd.
            for (std::size_t k = 0; k < g; ++k) {
                ext.N[g - 1 - k] = state.N[k];
                ext.Gamma[g - 1 - k] = -state.Gamma[k];
            }
            break;
        case BcKind::Periodic:
            for (std::size_t k = 0; k < g; ++k) {
                ext.N[g - 1 - k] = state.N[n - 1 - k];
                ext.Gamma[g - 1 - k] = state.Gamma[n - 1 - k];
            }
            break;
        case BcKind::ExactDirichlet:
            for (std::size_t k = 0; k < g; ++k) {
                const double x = left_ghost_x(k);
                ext.N[g - 1 - k] = bc.dirichlet_case->N_exact(t, x);
                ext.Gamma[g - 1 - k] = bc.dirichlet_case->Gamma_exact(t, x);
            }
            break;
        case BcKind::AsymptoticOutflow:
            break;  // rejected above
    }

    switch (bc.right) {
        case BcKind::Symmetry:
            for (std::size_t k = 0; k < g; ++k) {
                ext.N[g + n + k] = state.N[n - 1 - k];
                ext.Gamma[g + n + k] = -state.Gamma[n - 1 - k];
            }
            break;
        case BcKind::Periodic:
            for (std::size_t k = 0; k < g; ++k) {
                ext.N[g + n + k] = state.N[k];
                ext.Gamma[g + n + k] = state.Gamma[k];
            }
            break;
        case BcKind::ExactDirichlet:
            for (std::size_t k = 0; k < g; ++k) {
                const double x = right_ghost_x(k);
                ext.N[g + n + k] = bc.dirichlet_case->N_exact(t, x);
                ext.Gamma[g + n + k] = bc.dirichlet_case->Gamma_exact(t, x);
            }
            break;
        case BcKind::AsymptoticOutflow:
            for (std::size_t k = 0; k < g; ++k) {
                const double x = right_ghost_x(k);
                const auto [N_bc, M_bc] = asymptotic_bc(t, x, bc.M0);
                ext.N[g + n + k] = N_bc;
                ext.Gamma[g + n + k] = N_bc * M_bc;
            }
            break;
    }

    return ext;
}

}  // namespace solfv
