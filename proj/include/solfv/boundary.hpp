#pragma once

#include <utility>

#include "solfv/cases.hpp"
#include "solfv/grid.hpp"

namespace solfv {

enum class BcKind { Symmetry, Periodic, ExactDirichlet, AsymptoticOutflow };

/// Ghost-cell prescription, depth 2 on each side. Periodic must be set on
/// both sides or neither. ExactDirichlet samples dirichlet_case at ghost
/// centers; AsymptoticOutflow (right side only, regular case only) uses the
/// zeroth-order expansion fields with Mach M0.
struct BoundaryCondition {
    BcKind left = BcKind::Symmetry;
    BcKind right = BcKind::ExactDirichlet;
    const ManufacturedCase* dirichlet_case = nullptr;
    double M0 = 0.9;

    static constexpr std::size_t ghost_depth = 2;
};

/// State extended by two ghost cells per side: cell i of the physical mesh
/// sits at index i + 2.
struct ExtendedState {
    std::vector<double> N;
    std::vector<double> Gamma;
};

/// Fills ghosts for the field values frozen at time t (the stage time used
/// for time-dependent prescriptions). Throws std::invalid_argument on an
/// inconsistent prescription.
ExtendedState fill_ghosts(const FieldState& state, const Grid1D& grid,
                          const BoundaryCondition& bc, double t);

/// Zeroth-order expansion fields beyond the outer limiter edge: returns
/// (N_BC, M_BC) with M_BC = M0. Branch t < (x - 0.4)/M0 transports the
/// initial trace, else the interface trace flows in; both meet at exp(-1)
/// on the branch line.
std::pair<double, double> asymptotic_bc(double t, double x, double M0);

}  // namespace solfv
