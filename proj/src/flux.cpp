#include "solfv/flux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace solfv {

namespace {

double sign_of(double v) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

}  // namespace

NumericalFlux physical_flux(double N, double Gamma) {
    return {Gamma, Gamma * Gamma / N + N, false};
}

double minmod(double a, double b) {
    return 0.5 * (sign_of(a) + sign_of(b)) * std::min(std::abs(a), std::abs(b));
}

InterfaceStates muscl_reconstruct(std::span<const double> N,
                                  std::span<const double> Gamma, double dx) {
    const std::size_t m = N.size();
    if (m < 2 || Gamma.size() != m) {
        throw std::invalid_argument("muscl_reconstruct: need two equal-size fields");
    }

    auto slope = [&](std::span<const double> u, std::size_t i) {
        if (i == 0 || i + 1 == m) {
            return 0.0;
        }
        return minmod((u[i + 1] - u[i]) / dx, (u[i] - u[i - 1]) / dx);
    };

    InterfaceStates out;
    out.N_l.resize(m - 1);
    out.Gamma_l.resize(m - 1);
    out.N_r.resize(m - 1);
    out.Gamma_r.resize(m - 1);

    std::vector<double> sN(m), sG(m);
    for (std::size_t i = 0; i < m; ++i) {
        sN[i] = slope(N, i);
        sG[i] = slope(Gamma, i);
    }

    const double h = 0.5 * dx;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        out.N_l[k] = N[k] + h * sN[k];
        out.Gamma_l[k] = Gamma[k] + h * sG[k];
        out.N_r[k] = N[k + 1] - h * sN[k + 1];
        out.Gamma_r[k] = Gamma[k + 1] - h * sG[k + 1];
        if (!(out.N_l[k] > 0.0) || !(out.N_r[k] > 0.0)) {
            throw std::domain_error(
                "muscl_reconstruct: nonpositive density at interface " +
                std::to_string(k));
        }
    }
    return out;
}

InterfaceStates muscl_reconstruct(const FieldState& state, const Grid1D& grid) {
    return muscl_reconstruct(state.N, state.Gamma, grid.dx);
}

bool needs_entropy_fix(double M_l, double M_r) {
    if (M_l == M_r) {
        return false;
    }
    const bool sonic_minus = (M_l - 1.0 <= 0.0) && (0.0 <= M_r - 1.0);
    const bool sonic_plus = (M_l + 1.0 <= 0.0) && (0.0 <= M_r + 1.0);
    return sonic_minus || sonic_plus;
}

std::optional<NumericalFlux> try_vfroe_ncv_flux(double N_l, double Gamma_l,
                                                double N_r, double Gamma_r) {
    const double M_l = Gamma_l / N_l;
    const double M_r = Gamma_r / N_r;
    const double Nbar = 0.5 * (N_l + N_r);
    const double Mbar = 0.5 * (M_l + M_r);
    const double dN = N_r - N_l;
    const double dM = M_r - M_l;

    const double sigma1 = 0.5 * (dM - dN / Nbar);
    const double sigma2 = 0.5 * (dM + dN / Nbar);

    // Sample the linearized solution at x/t = 0: start from the left state
    // and cross every wave of strictly negative speed (a standing wave is
    // treated as not crossed).
    double Nt = N_l;
    double Mt = M_l;
    if (Mbar - 1.0 < 0.0) {
        Nt -= sigma1 * Nbar;
        Mt += sigma1;
    }
    if (Mbar + 1.0 < 0.0) {
        Nt += sigma2 * Nbar;
        Mt += sigma2;
    }

    if (!(Nt > 0.0)) {
        return std::nullopt;
    }
    const double Gt = Mt * Nt;
    return NumericalFlux{Gt, Gt * Gt / Nt + Nt, false};
}

NumericalFlux vfroe_ncv_flux(double N_l, double Gamma_l, double N_r,
                             double Gamma_r) {
    auto flux = try_vfroe_ncv_flux(N_l, Gamma_l, N_r, Gamma_r);
    if (!flux) {
        throw std::domain_error("vfroe_ncv_flux: nonpositive interface density");
    }
    return *flux;
}

NumericalFlux rusanov_flux(double N_l, double Gamma_l, double N_r,
                           double Gamma_r, bool paper_literal_sign) {
    const NumericalFlux f_l = physical_flux(N_l, Gamma_l);
    const NumericalFlux f_r = physical_flux(N_r, Gamma_r);
    const double s =
        std::max(std::abs(Gamma_l / N_l), std::abs(Gamma_r / N_r)) + 1.0;
    const double w = paper_literal_sign ? 0.5 : -0.5;
    return {0.5 * (f_l.f_N + f_r.f_N) + w * s * (N_r - N_l),
            0.5 * (f_l.f_Gamma + f_r.f_Gamma) + w * s * (Gamma_r - Gamma_l),
            false};
}

NumericalFlux interface_flux(double N_l, double Gamma_l, double N_r,
                             double Gamma_r, const FluxOptions& options,
                             FluxCounters& counters) {
    if (needs_entropy_fix(Gamma_l / N_l, Gamma_r / N_r)) {
        ++counters.entropy_fix;
        NumericalFlux f =
            rusanov_flux(N_l, Gamma_l, N_r, Gamma_r, options.paper_literal_rusanov);
        f.used_entropy_fix = true;
        return f;
    }
    if (auto f = try_vfroe_ncv_flux(N_l, Gamma_l, N_r, Gamma_r)) {
        return *f;
    }
    ++counters.positivity_fallback;
    return rusanov_flux(N_l, Gamma_l, N_r, Gamma_r, options.paper_literal_rusanov);
}

std::optional<NumericalFlux> try_vfroe_ncv_flux_alpha(double N_l, double Gamma_l,
                                                      double alpha_l, double N_r,
                                                      double Gamma_r,
                                                      double alpha_r) {
    const double abar = 0.5 * (alpha_l + alpha_r);
    if (abar == 0.0) {
        return NumericalFlux{0.0, 0.0, false};
    }

    const double M_l = Gamma_l / N_l;
    const double M_r = Gamma_r / N_r;
    const double Nbar = 0.5 * (N_l + N_r);
    const double Mbar = 0.5 * (M_l + M_r);
    const double dN = N_r - N_l;
    const double dM = M_r - M_l;
    const double da = alpha_r - alpha_l;

    // Third characteristic field (the cutoff) has speed 0 and eigenvector
    // (Nbar, 0, -abar); the acoustic fields keep their 2x2 eigenvectors with
    // speeds scaled by abar.
    const double sigma1 = 0.5 * (dM - dN / Nbar - da / abar);
    const double sigma2 = 0.5 * (dM + dN / Nbar + da / abar);

    double Nt = N_l;
    double Mt = M_l;
    if (abar * (Mbar - 1.0) < 0.0) {
        Nt -= sigma1 * Nbar;
        Mt += sigma1;
    }
    if (abar * (Mbar + 1.0) < 0.0) {
        Nt += sigma2 * Nbar;
        Mt += sigma2;
    }

    if (!(Nt > 0.0)) {
        return std::nullopt;
    }
    const double Gt = Mt * Nt;
    return NumericalFlux{abar * Gt, abar * (Gt * Gt / Nt + Nt), false};
}

NumericalFlux rusanov_flux_alpha(double N_l, double Gamma_l, double alpha_l,
                                 double N_r, double Gamma_r, double alpha_r,
                                 bool paper_literal_sign) {
    const double abar = 0.5 * (alpha_l + alpha_r);
    NumericalFlux f = rusanov_flux(N_l, Gamma_l, N_r, Gamma_r, paper_literal_sign);
    return {abar * f.f_N, abar * f.f_Gamma, false};
}

NumericalFlux interface_flux_alpha(double N_l, double Gamma_l, double alpha_l,
                                   double N_r, double Gamma_r, double alpha_r,
                                   const FluxOptions& options,
                                   FluxCounters& counters) {
    if (needs_entropy_fix(Gamma_l / N_l, Gamma_r / N_r)) {
        ++counters.entropy_fix;
        NumericalFlux f = rusanov_flux_alpha(N_l, Gamma_l, alpha_l, N_r, Gamma_r,
                                             alpha_r, options.paper_literal_rusanov);
        f.used_entropy_fix = true;
        return f;
    }
    if (auto f = try_vfroe_ncv_flux_alpha(N_l, Gamma_l, alpha_l, N_r, Gamma_r,
                                          alpha_r)) {
        return *f;
    }
    ++counters.positivity_fallback;
    return rusanov_flux_alpha(N_l, Gamma_l, alpha_l, N_r, Gamma_r, alpha_r,
                              options.paper_literal_rusanov);
}

}  // namespace solfv
