#include "solfv/cases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "solfv/boundary.hpp"

namespace solfv {

namespace {

constexpr double kDecay = 6.25;  // 1 / 0.16
const double kOmega = std::numbers::pi / 0.8;

double sign_of(double v) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

// Fields of the regular solution and their closed-form PDE residuals
// (tau = t + 1):
//   N = exp(-kDecay x^2 / tau),  Gamma = M0 sin(kOmega x) N.
double base_N(double t, double x) {
    const double tau = t + 1.0;
    return std::exp(-kDecay * x * x / tau);
}

double base_Gamma(double t, double x, double M0) {
    return M0 * std::sin(kOmega * x) * base_N(t, x);
}

// S_N = dt(N) + dx(Gamma).
double base_S_N(double t, double x, double M0) {
    const double tau = t + 1.0;
    const double N = base_N(t, x);
    const double s = std::sin(kOmega * x);
    const double c = std::cos(kOmega * x);
    return N * (kDecay * x * x / (tau * tau) +
                M0 * (kOmega * c - 2.0 * kDecay * x * s / tau));
}

// S_Gamma = dt(Gamma) + dx(Gamma^2/N + N).
double base_S_Gamma(double t, double x, double M0) {
    const double tau = t + 1.0;
    const double N = base_N(t, x);
    const double s = std::sin(kOmega * x);
    const double c = std::cos(kOmega * x);
    return N * (M0 * s * kDecay * x * x / (tau * tau) -
                (2.0 * kDecay * x / tau) * (1.0 + M0 * M0 * s * s) +
                2.0 * M0 * M0 * kOmega * s * c);
}

}  // namespace

FieldState ManufacturedCase::initial_state(const Grid1D& grid) const {
    FieldState state;
    state.t = 0.0;
    state.N.resize(grid.n_cells);
    state.Gamma.resize(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double x = grid.cell_center(i);
        state.N[i] = N_exact(0.0, x);
        state.Gamma[i] = Gamma_exact(0.0, x);
    }
    return state;
}

ManufacturedCase case_regular(double M0) {
    if (!(M0 > 0.0 && M0 <= 1.0)) {
        throw std::invalid_argument("case_regular: M0 must be in (0, 1]");
    }
    ManufacturedCase c;
    c.name = "regular";
    c.N_exact = [](double t, double x) { return base_N(t, x); };
    c.Gamma_exact = [M0](double t, double x) { return base_Gamma(t, x, M0); };
    // Sources are null inside the limiter x > 0.4.
    c.S_N = [M0](double t, double x) {
        return x > 0.4 ? 0.0 : base_S_N(t, x, M0);
    };
    c.S_Gamma = [M0](double t, double x) {
        return x > 0.4 ? 0.0 : base_S_Gamma(t, x, M0);
    };
    // Vanishing-penalty limit inside the limiter: zeroth-order transport fed
    // by the interface trace, with M = M0 there.
    c.N_ref_limiter = [M0](double t, double x) {
        return asymptotic_bc(t, x, M0).first;
    };
    c.Gamma_ref_limiter = [M0](double t, double x) {
        return M0 * asymptotic_bc(t, x, M0).first;
    };
    return c;
}

ManufacturedCase case_isoardi() {
    ManufacturedCase c = case_regular(1.0);
    c.name = "isoardi";
    return c;
}

ManufacturedCase case_stationary(double S, double M0) {
    if (!(S > 0.0)) {
        throw std::invalid_argument("case_stationary: S must be positive");
    }
    if (!(M0 > 0.0 && M0 <= 1.0)) {
        throw std::invalid_argument("case_stationary: M0 must be in (0, 1]");
    }
    ManufacturedCase c;
    c.name = "stationary";
    const double cc = 0.2 * (1.0 / M0 + M0);
    // Interface-trace constants extend the fields past |x| = 0.4 (the sqrt
    // domain ends at cc, barely beyond the interface); the extension is an
    // exact steady state of the penalized system for every eps.
    c.N_exact = [S, cc, M0](double, double x) {
        if (std::abs(x) <= 0.4) {
            return S * (cc + std::sqrt(cc * cc - x * x));
        }
        return 0.4 * S / M0;
    };
    c.Gamma_exact = [S](double, double x) {
        if (std::abs(x) <= 0.4) {
            return S * x;
        }
        return sign_of(x) * 0.4 * S;
    };
    c.S_N = [S](double, double x) { return std::abs(x) <= 0.4 ? S : 0.0; };
    c.S_Gamma = [](double, double) { return 0.0; };
    return c;
}

ManufacturedCase case_two_sided(double M0) {
    if (!(M0 > 0.0 && M0 <= 1.0)) {
        throw std::invalid_argument("case_two_sided: M0 must be in (0, 1]");
    }
    ManufacturedCase c;
    c.name = "two_sided_regular";
    // Mirror map xi = 0.5 - |x|: the periodic seam at x = +-0.5 plays the
    // one-sided symmetry axis, the interfaces |x| = 0.1 map to xi = 0.4.
    c.N_exact = [](double t, double x) { return base_N(t, 0.5 - std::abs(x)); };
    c.Gamma_exact = [M0](double t, double x) {
        return -sign_of(x) * base_Gamma(t, 0.5 - std::abs(x), M0);
    };
    c.S_N = [M0](double t, double x) {
        if (std::abs(x) < 0.1) return 0.0;
        return base_S_N(t, 0.5 - std::abs(x), M0);
    };
    c.S_Gamma = [M0](double t, double x) {
        if (std::abs(x) < 0.1) return 0.0;
        return -sign_of(x) * base_S_Gamma(t, 0.5 - std::abs(x), M0);
    };
    c.N_ref_limiter = [M0](double t, double x) {
        return asymptotic_bc(t, 0.5 - std::abs(x), M0).first;
    };
    c.Gamma_ref_limiter = [M0](double t, double x) {
        return -sign_of(x) * M0 * asymptotic_bc(t, 0.5 - std::abs(x), M0).first;
    };
    return c;
}

ManufacturedCase make_case(const std::string& name, double M0, double S) {
    if (name == "regular") return case_regular(M0);
    if (name == "isoardi") return case_isoardi();
    if (name == "stationary") return case_stationary(S, M0);
    if (name == "two_sided_regular") return case_two_sided(M0);
    throw std::invalid_argument("make_case: unknown case '" + name + "'");
}

ReferenceField analytic_reference(const ManufacturedCase& c, const Grid1D& grid,
                                  const RegionMask& mask, double t) {
    ReferenceField ref;
    ref.N.resize(grid.n_cells);
    ref.Gamma.resize(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double x = grid.cell_center(i);
        const bool in_limiter = mask.chi[i] != 0.0;
        if (in_limiter && c.N_ref_limiter) {
            ref.N[i] = c.N_ref_limiter(t, x);
            ref.Gamma[i] = c.Gamma_ref_limiter(t, x);
        } else {
            ref.N[i] = c.N_exact(t, x);
            ref.Gamma[i] = c.Gamma_exact(t, x);
        }
    }
    return ref;
}

NumericalReference::NumericalReference(const Grid1D& grid, FieldState final_state)
    : grid_(grid), state_(std::move(final_state)) {
    if (state_.size() != grid_.n_cells) {
        throw std::invalid_argument("NumericalReference: state/grid mismatch");
    }
}

ReferenceField NumericalReference::at(const Grid1D& grid) const {
    if (grid.n_cells != grid_.n_cells || grid.x_min != grid_.x_min ||
        grid.x_max != grid_.x_max) {
        throw std::invalid_argument("NumericalReference: mesh mismatch");
    }
    return {state_.N, state_.Gamma};
}

}  // namespace solfv
