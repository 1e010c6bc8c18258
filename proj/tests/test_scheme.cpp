#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "solfv/analysis.hpp"
#include "solfv/scheme.hpp"

using namespace solfv;

namespace {

/// Constant fields, zero sources: with symmetric ghosts every flux
/// difference vanishes, isolating the penalty terms.
ManufacturedCase quiet_case() {
    ManufacturedCase c;
    c.name = "quiet";
    c.N_exact = [](double, double) { return 1.0; };
    c.Gamma_exact = [](double, double) { return 0.0; };
    c.S_N = [](double, double) { return 0.0; };
    c.S_Gamma = [](double, double) { return 0.0; };
    return c;
}

BoundaryCondition mirror_bc() {
    BoundaryCondition bc;
    bc.left = BcKind::Symmetry;
    bc.right = BcKind::Symmetry;
    return bc;
}

FieldState uniform_state(std::size_t n) {
    FieldState s;
    s.t = 0.0;
    s.N.assign(n, 1.0);
    s.Gamma.assign(n, 0.0);
    return s;
}

PenaltyScheme penalty(SchemeKind kind, const RegionMask& mask, double eps,
                      double M0 = 0.9) {
    PenaltyScheme p;
    p.kind = kind;
    p.epsilon = eps;
    p.M0 = M0;
    p.mask = mask;
    return p;
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b,
               double dx) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]) * dx;
    return sum;
}

}  // namespace

TEST_CASE("CFL step uses the largest characteristic speed") {
    const auto gb = build_grid(0.0, 1.0, 5, std::nullopt);
    FieldState s = uniform_state(5);
    s.Gamma[2] = -1.5;  // M = -1.5, speed 2.5
    CHECK(compute_dt(s, gb.grid, 0.8) ==
          doctest::Approx(0.8 * 0.2 / 2.5).epsilon(1e-15));
    CHECK(compute_dt(s, gb.grid, 0.4) ==
          doctest::Approx(0.4 * 0.2 / 2.5).epsilon(1e-15));
    CHECK_THROWS_AS(compute_dt(s, gb.grid, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_dt(s, gb.grid, 1.5), std::invalid_argument);
    s.Gamma[1] = std::nan("");
    CHECK_THROWS_AS(compute_dt(s, gb.grid, 0.8), std::domain_error);
}

TEST_CASE("two-stage step integrates constant and linear sources exactly") {
    // A consistent two-stage average advances a constant source by dt
    // (not 3 dt / 2) and a linear-in-time source by its exact trapezoid.
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    ManufacturedCase c = quiet_case();
    c.S_N = [](double, double) { return 1.0; };
    FieldState s = uniform_state(10);
    PenaltyScheme none;
    const double dt = 1e-4;
    step_heun(s, gb.grid, none, c, mirror_bc(), dt);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(s.N[i] == doctest::Approx(1.0 + dt).epsilon(1e-15));
    }

    c.S_N = [](double t, double) { return t; };
    FieldState lin = uniform_state(10);
    step_heun(lin, gb.grid, none, c, mirror_bc(), dt);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(lin.N[i] ==
              doctest::Approx(1.0 + 0.5 * dt * dt).epsilon(1e-15));
    }
}

/// Mask with every cell penalized. Combined with periodic ghosts and a
/// uniform state, both stages see identical cells everywhere, every flux
/// difference vanishes, and the update is the bare relaxation closed form.
RegionMask all_penalized(const RegionMask& base) {
    RegionMask mask = base;
    mask.chi.assign(mask.chi.size(), 1.0);
    return mask;
}

BoundaryCondition periodic_bc() {
    BoundaryCondition bc;
    bc.left = BcKind::Periodic;
    bc.right = BcKind::Periodic;
    return bc;
}

TEST_CASE("unpenalized density relaxation closed form") {
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    const PenaltyScheme p =
        penalty(SchemeKind::Optimal, all_penalized(gb.mask), 1e-3);
    step_heun(s, gb.grid, p, c, periodic_bc(), 1e-4);
    // pen = dt/eps = 0.1: Gamma = 0.1 / (1 + 0.1/0.9) = 0.09, N untouched.
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(s.N[i] == 1.0);
        CHECK(s.Gamma[i] == doctest::Approx(0.09).epsilon(1e-12));
    }

    // With a genuine limiter the relaxation only reaches cells within the
    // two-stage stencil of the penalized block; farther cells are bitwise
    // untouched and the limiter flux still lands near the closed form.
    const auto gl = build_grid(0.0, 0.5, 10, LimiterSpec{0.4, 0.5, false});
    FieldState iso = uniform_state(10);
    step_heun(iso, gl.grid, penalty(SchemeKind::Optimal, gl.mask, 1e-3), c,
              mirror_bc(), 1e-4);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(iso.N[i] == 1.0);
        CHECK(iso.Gamma[i] == 0.0);
    }
    CHECK(iso.Gamma[9] == doctest::Approx(0.09).epsilon(2e-3));
}

TEST_CASE("unpenalized density relaxation reaches its fixed point") {
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    const PenaltyScheme p =
        penalty(SchemeKind::Optimal, all_penalized(gb.mask), 1e-3);
    RunHooks hooks;
    hooks.fixed_dt = 1e-3;
    run_until(s, 0.05, gb.grid, p, c, periodic_bc(), hooks);
    // The relaxation target of Gamma is M0 N with N untouched.
    CHECK(s.Gamma[9] == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(s.N[9] == 1.0);
}

TEST_CASE("relaxed-stage stepping halves only the penalty coefficient") {
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    const ManufacturedCase c = quiet_case();
    PenaltyScheme p = penalty(SchemeKind::Optimal, all_penalized(gb.mask), 1e-3);
    p.strict_paper_stepping = false;
    FieldState s = uniform_state(10);
    step_heun(s, gb.grid, p, c, periodic_bc(), 1e-4);
    // Second stage uses pen = dt/(2 eps) = 0.05.
    CHECK(s.Gamma[9] ==
          doctest::Approx(0.05 / (1.0 + 0.05 / 0.9)).epsilon(1e-12));
}

TEST_CASE("density-cut scheme closed forms") {
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    const RegionMask mask = all_penalized(gb.mask);
    const ManufacturedCase c = quiet_case();
    const double dt = 1e-4;
    const double pen = dt / 1e-3;

    // Both density-relaxing schemes crush N by 1/(1 + pen) per step.
    FieldState iso = uniform_state(10);
    step_heun(iso, gb.grid, penalty(SchemeKind::Isoardi, mask, 1e-3), c,
              periodic_bc(), dt);
    const double N1 = 1.0 / (1.0 + pen);
    CHECK(iso.N[9] == doctest::Approx(N1).epsilon(1e-12));
    CHECK(iso.Gamma[9] ==
          doctest::Approx(pen * 0.9 * N1 / (1.0 + pen)).epsilon(1e-12));

    FieldState tf = uniform_state(10);
    step_heun(tf, gb.grid, penalty(SchemeKind::TwoFields, mask, 1e-3), c,
              periodic_bc(), dt);
    CHECK(tf.N[9] == doctest::Approx(N1).epsilon(1e-12));
    CHECK(tf.Gamma[9] ==
          doctest::Approx(pen * 0.9 * N1 / (1.0 + pen / N1)).epsilon(1e-12));

    PenaltyScheme alt = penalty(SchemeKind::TwoFields, mask, 1e-3);
    alt.two_fields_form = TwoFieldsForm::System10;
    FieldState tf2 = uniform_state(10);
    step_heun(tf2, gb.grid, alt, c, periodic_bc(), dt);
    CHECK(tf2.Gamma[9] ==
          doctest::Approx(pen * N1 / (1.0 + pen / 0.9)).epsilon(1e-12));

    // Outside a genuine limiter block the density equation is untouched.
    const auto gl = build_grid(0.0, 0.5, 10, LimiterSpec{0.4, 0.5, false});
    FieldState part = uniform_state(10);
    step_heun(part, gl.grid, penalty(SchemeKind::Isoardi, gl.mask, 1e-3), c,
              mirror_bc(), dt);
    CHECK(part.N[0] == 1.0);
    CHECK(part.Gamma[0] == 0.0);
    CHECK(part.N[9] == doctest::Approx(N1).epsilon(2e-3));
}

TEST_CASE("two-sided relaxation pushes the flux toward the nearer edge") {
    const auto gb = build_grid(-0.5, 0.5, 10, std::nullopt);
    RegionMask mask = gb.mask;
    mask.two_sided = true;
    mask.chi[4] = 1.0;  // center -0.05
    mask.chi[5] = 1.0;  // center +0.05
    BoundaryCondition bc;
    bc.left = BcKind::Periodic;
    bc.right = BcKind::Periodic;
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    const PenaltyScheme p = penalty(SchemeKind::OptimalTwoSided, mask, 1e-3);
    step_heun(s, gb.grid, p, c, bc, 1e-4);
    // side_sign is +1 left of the origin and -1 right of it. The opposed
    // pair leaves a flux kink, so the second stage smears the closed form
    // by O(dt dGamma/dx); only far cells stay bitwise quiet.
    CHECK(s.Gamma[4] == doctest::Approx(0.09).epsilon(2e-3));
    CHECK(s.Gamma[5] == doctest::Approx(-0.09).epsilon(2e-3));
    CHECK(s.Gamma[0] == 0.0);
    CHECK(s.N[4] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("deep penalty floors the crushed density at the smallest normal") {
    // Every cell penalized, uniform fields: the density contracts by
    // ~1e-16 per step and would pass through zero near step 40 without the
    // floor. While it contracts, M climbs by ~M0 each step (Gamma relaxes
    // toward M0 times the already-crushed density), so the Mach threshold
    // is lifted out of the way; once the floor engages, M falls back to M0.
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    RegionMask mask = gb.mask;
    mask.chi.assign(10, 1.0);
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    const PenaltyScheme p = penalty(SchemeKind::Isoardi, mask, 1e-20);
    RunHooks hooks;
    hooks.fixed_dt = 1e-4;
    hooks.blow_up_threshold = 1e3;
    const RunLog log = run_until(s, 4e-3, gb.grid, p, c, mirror_bc(), hooks);
    CHECK_FALSE(log.blow_up.has_value());
    CHECK(log.steps == 40);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(s.N[i] == std::numeric_limits<double>::min());
        CHECK(std::isfinite(s.Gamma[i]));
        CHECK(std::isfinite(s.M(i)));
    }
}

TEST_CASE("vanishing penalty strength reduces every scheme to the bare one") {
    const auto gb = build_grid(0.0, 0.5, 50, LimiterSpec{0.4, 0.5, false});
    const ManufacturedCase c = case_regular(0.9);
    BoundaryCondition bc;
    bc.left = BcKind::Symmetry;
    bc.right = BcKind::ExactDirichlet;
    bc.dirichlet_case = &c;
    RunHooks hooks;
    hooks.fixed_dt = 1e-3;

    FieldState base = c.initial_state(gb.grid);
    run_until(base, 5e-3, gb.grid, PenaltyScheme{}, c, bc, hooks);

    for (SchemeKind kind : {SchemeKind::Optimal, SchemeKind::TwoFields}) {
        FieldState s = c.initial_state(gb.grid);
        run_until(s, 5e-3, gb.grid, penalty(kind, gb.mask, 1e12), c, bc, hooks);
        for (std::size_t i = 0; i < 50; ++i) {
            CHECK(std::abs(s.N[i] - base.N[i]) <= 1e-9);
            CHECK(std::abs(s.Gamma[i] - base.Gamma[i]) <= 1e-9);
        }
    }

    // The density-cut scheme rewires the limiter fluxes outright, so only
    // cells outside the numerical domain of dependence of the limiter can
    // match; after 5 steps that front has moved at most 15 cells from the
    // interface cell 40.
    FieldState iso = c.initial_state(gb.grid);
    run_until(iso, 5e-3, gb.grid, penalty(SchemeKind::Isoardi, gb.mask, 1e12),
              c, bc, hooks);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(iso.N[i] == base.N[i]);
        CHECK(iso.Gamma[i] == base.Gamma[i]);
    }
}

TEST_CASE("vanishing two-sided penalty matches far from the cutoff band") {
    const auto gb = build_grid(-0.5, 0.5, 60, LimiterSpec{-0.1, 0.1, true});
    const ManufacturedCase c = case_two_sided(0.9);
    BoundaryCondition bc;
    bc.left = BcKind::Periodic;
    bc.right = BcKind::Periodic;
    RunHooks hooks;
    hooks.fixed_dt = 1e-3;

    FieldState base = c.initial_state(gb.grid);
    run_until(base, 5e-3, gb.grid, PenaltyScheme{}, c, bc, hooks);

    FieldState s = c.initial_state(gb.grid);
    run_until(s, 5e-3, gb.grid,
              penalty(SchemeKind::OptimalTwoSided, gb.mask, 1e12), c, bc,
              hooks);
    for (std::size_t i = 0; i < 60; ++i) {
        if (std::abs(gb.grid.cell_center(i)) < 0.35) continue;
        CHECK(std::abs(s.N[i] - base.N[i]) <= 1e-9);
        CHECK(std::abs(s.Gamma[i] - base.Gamma[i]) <= 1e-9);
    }
}

TEST_CASE("periodic unforced flow conserves mass and momentum") {
    const auto gb = build_grid(-0.5, 0.5, 64, std::nullopt);
    ManufacturedCase c = quiet_case();
    FieldState s;
    s.t = 0.0;
    s.N.resize(64);
    s.Gamma.resize(64);
    for (std::size_t i = 0; i < 64; ++i) {
        const double x = gb.grid.cell_center(i);
        s.N[i] = 1.2 + 0.3 * std::cos(2.0 * std::numbers::pi * x);
        s.Gamma[i] = 0.1 * std::sin(2.0 * std::numbers::pi * x);
    }
    double mass0 = 0.0, mom0 = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        mass0 += s.N[i] * gb.grid.dx;
        mom0 += s.Gamma[i] * gb.grid.dx;
    }
    BoundaryCondition bc;
    bc.left = BcKind::Periodic;
    bc.right = BcKind::Periodic;
    const RunLog log = run_until(s, 0.05, gb.grid, PenaltyScheme{}, c, bc);
    CHECK(log.steps >= 4);
    double mass = 0.0, mom = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        mass += s.N[i] * gb.grid.dx;
        mom += s.Gamma[i] * gb.grid.dx;
    }
    CHECK(std::abs(mass - mass0) <= 1e-12 * mass0);
    CHECK(std::abs(mom - mom0) <= 1e-12 * mass0);
}

TEST_CASE("fixed-step override lands exactly on the final time") {
    const auto gb = build_grid(0.0, 0.5, 10, std::nullopt);
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    RunHooks hooks;
    hooks.fixed_dt = 0.003;
    std::size_t calls = 0;
    hooks.on_step = [&](std::size_t step, const FieldState&, const StepReport& r) {
        calls = step;
        CHECK(r.dt_used > 0.0);
    };
    const RunLog log = run_until(s, 0.01, gb.grid, PenaltyScheme{}, c,
                                 mirror_bc(), hooks);
    CHECK(log.steps == 4);
    CHECK(calls == 4);
    CHECK(log.final_time == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(s.t == log.final_time);
}

TEST_CASE("time integration is second order in the step size") {
    // Self-convergence on one mesh with the first-order spatial operator,
    // whose smooth flux keeps the semi-discrete system differentiable.
    const auto gb = build_grid(0.0, 0.4, 50, std::nullopt);
    const ManufacturedCase c = case_regular(0.9);
    BoundaryCondition bc;
    bc.left = BcKind::ExactDirichlet;
    bc.right = BcKind::ExactDirichlet;
    bc.dirichlet_case = &c;
    PenaltyScheme none;
    none.use_muscl = false;

    auto solve = [&](double dt) {
        FieldState s = c.initial_state(gb.grid);
        RunHooks hooks;
        hooks.fixed_dt = dt;
        run_until(s, 0.048, gb.grid, none, c, bc, hooks);
        return s;
    };
    const FieldState ref = solve(5e-5);
    std::vector<std::pair<double, double>> points;
    for (double dt : {8e-4, 4e-4, 2e-4}) {
        points.push_back({dt, l1_diff(solve(dt).N, ref.N, gb.grid.dx)});
    }
    const RateFit fit = fit_rate(points);
    CHECK(fit.slope >= 1.8);
    CHECK(fit.slope <= 2.3);
}

TEST_CASE("a stage that loses positivity is reported with its cell") {
    const auto gb = build_grid(0.0, 1.0, 10, std::nullopt);
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    for (std::size_t i = 0; i < 10; ++i) s.Gamma[i] = i < 5 ? -1.0 : 1.0;
    try {
        step_heun(s, gb.grid, PenaltyScheme{}, c, mirror_bc(), 1.0);
        FAIL("expected PositivityError");
    } catch (const PositivityError& err) {
        CHECK(err.cell == 4);
        CHECK(err.time == doctest::Approx(1.0));
        CHECK(err.value <= 0.0);
    }
}

TEST_CASE("run_until converts a lost stage into a recorded event") {
    const auto gb = build_grid(0.0, 1.0, 10, std::nullopt);
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);
    for (std::size_t i = 0; i < 10; ++i) s.Gamma[i] = i < 5 ? -1.0 : 1.0;
    RunHooks hooks;
    hooks.fixed_dt = 1.0;
    const RunLog log = run_until(s, 2.0, gb.grid, PenaltyScheme{}, c,
                                 mirror_bc(), hooks);
    REQUIRE(log.blow_up.has_value());
    CHECK(log.blow_up->cell == 4);
    CHECK(log.steps == 0);
}

TEST_CASE("the Mach threshold stops a run early") {
    const auto gb = build_grid(0.0, 0.5, 50, LimiterSpec{0.4, 0.5, false});
    const ManufacturedCase c = case_regular(0.9);
    BoundaryCondition bc;
    bc.left = BcKind::Symmetry;
    bc.right = BcKind::ExactDirichlet;
    bc.dirichlet_case = &c;
    FieldState s = c.initial_state(gb.grid);
    RunHooks hooks;
    hooks.blow_up_threshold = 0.5;
    const RunLog log = run_until(s, 1.0, gb.grid, PenaltyScheme{}, c, bc, hooks);
    REQUIRE(log.blow_up.has_value());
    CHECK(log.steps == 1);
    CHECK(log.final_time < 1.0);
    CHECK(log.blow_up->max_abs_M > 0.5);
}

TEST_CASE("smooth subsonic runs never trigger the entropy correction") {
    const auto gb = build_grid(0.0, 0.4, 40, std::nullopt);
    const ManufacturedCase c = case_regular(0.9);
    BoundaryCondition bc;
    bc.left = BcKind::ExactDirichlet;
    bc.right = BcKind::ExactDirichlet;
    bc.dirichlet_case = &c;
    FieldState s = c.initial_state(gb.grid);
    const RunLog log = run_until(s, 0.02, gb.grid, PenaltyScheme{}, c, bc);
    CHECK(log.entropy_fix_count == 0);
    CHECK(log.positivity_fallback_count == 0);
}

TEST_CASE("scheme parameters are validated before stepping") {
    const auto gb = build_grid(0.0, 0.5, 10, LimiterSpec{0.4, 0.5, false});
    const ManufacturedCase c = quiet_case();
    FieldState s = uniform_state(10);

    PenaltyScheme bad_eps = penalty(SchemeKind::Optimal, gb.mask, -1.0);
    CHECK_THROWS_AS(step_heun(s, gb.grid, bad_eps, c, mirror_bc(), 1e-4),
                    std::invalid_argument);

    PenaltyScheme bad_m0 = penalty(SchemeKind::Optimal, gb.mask, 1e-3, 1.5);
    CHECK_THROWS_AS(step_heun(s, gb.grid, bad_m0, c, mirror_bc(), 1e-4),
                    std::invalid_argument);

    PenaltyScheme bad_mask = penalty(SchemeKind::Optimal, RegionMask{}, 1e-3);
    CHECK_THROWS_AS(step_heun(s, gb.grid, bad_mask, c, mirror_bc(), 1e-4),
                    std::invalid_argument);

    CHECK_THROWS_AS(step_heun(s, gb.grid, PenaltyScheme{}, c, mirror_bc(), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(step_heun(s, gb.grid, PenaltyScheme{}, c, mirror_bc(),
                              std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}
