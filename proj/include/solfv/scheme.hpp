#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

#include "solfv/boundary.hpp"
#include "solfv/cases.hpp"
#include "solfv/flux.hpp"
#include "solfv/grid.hpp"

namespace solfv {

/// Which volume-penalization closes the limiter cells. None integrates the
/// plain balance law (plasma-only runs and penalty-free references).
enum class SchemeKind { None, Isoardi, TwoFields, Optimal, OptimalTwoSided };

/// The two printed forms of the two-field Gamma relaxation. UpdateBlock
/// divides by 1 + dt chi / (eps N) (fixed point Gamma = M0 N^2); System10
/// divides by 1 + dt chi / (eps M0) (fixed point Gamma = M0 N).
enum class TwoFieldsForm { UpdateBlock, System10 };

struct PenaltyScheme {
    SchemeKind kind = SchemeKind::None;
    double epsilon = 1e-3;
    double M0 = 0.9;
    RegionMask mask;
    TwoFieldsForm two_fields_form = TwoFieldsForm::UpdateBlock;
    /// Both stages apply the penalty with the full-dt implicit coefficient
    /// (asymmetric against the half-weighted stage-two fluxes). Off halves
    /// the stage-two coefficient as well; kept only for experiments.
    bool strict_paper_stepping = true;
    bool use_muscl = true;
    FluxOptions flux_options;
};

struct StepReport {
    double dt_used = 0.0;
    double max_abs_M = 0.0;
    std::size_t entropy_fix_count = 0;
    std::size_t positivity_fallback_count = 0;
};

/// A stage update drove some density nonpositive or non-finite.
class PositivityError : public std::runtime_error {
  public:
    PositivityError(std::size_t cell, double time, double value);

    std::size_t cell;
    double time;
    double value;
};

/// CFL time step cfl dx / max_i(|M_i| + 1). Throws std::domain_error when a
/// Mach value is not finite.
double compute_dt(const FieldState& state, const Grid1D& grid, double cfl);

/// One Heun step of length dt in place: stage one takes a full forward step
/// (ghosts and sources at time t), stage two averages with a step from the
/// stage values (ghosts and sources at t + dt) at half weight, while the
/// penalty terms keep the full-dt implicit coefficients in both stages.
/// Throws PositivityError when a stage produces a nonpositive density.
StepReport step_heun(FieldState& state, const Grid1D& grid,
                     const PenaltyScheme& scheme, const ManufacturedCase& mc,
                     const BoundaryCondition& bc, double dt);

struct BlowUpEvent {
    double time = 0.0;
    std::size_t cell = 0;
    double max_abs_M = 0.0;
};

struct RunHooks {
    std::function<void(std::size_t step, const FieldState&, const StepReport&)>
        on_step;
    double cfl = 0.8;
    double blow_up_threshold = 10.0;
    /// Overrides the CFL step when set (still clamped to land on t_end).
    std::optional<double> fixed_dt;
};

struct RunLog {
    std::size_t steps = 0;
    double final_time = 0.0;
    std::size_t entropy_fix_count = 0;
    std::size_t positivity_fallback_count = 0;
    std::optional<BlowUpEvent> blow_up;
};

/// Advances state to t_end (last step clamped). Stops early when the Mach
/// number passes hooks.blow_up_threshold, a field value turns non-finite, or
/// a stage loses positivity; the event is recorded instead of thrown.
RunLog run_until(FieldState& state, double t_end, const Grid1D& grid,
                 const PenaltyScheme& scheme, const ManufacturedCase& mc,
                 const BoundaryCondition& bc, const RunHooks& hooks = {});

}  // namespace solfv
