#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "solfv/grid.hpp"

namespace solfv {

/// Left/right reconstructed interface traces. Entry k describes the
/// interface between cells k and k+1 of the array handed to
/// muscl_reconstruct, so a state of m cells yields m-1 interfaces.
struct InterfaceStates {
    std::vector<double> N_l, Gamma_l;
    std::vector<double> N_r, Gamma_r;

    std::size_t size() const { return N_l.size(); }
    double M_l(std::size_t k) const { return Gamma_l[k] / N_l[k]; }
    double M_r(std::size_t k) const { return Gamma_r[k] / N_r[k]; }
};

struct NumericalFlux {
    double f_N = 0.0;
    double f_Gamma = 0.0;
    bool used_entropy_fix = false;
};

/// Physical flux f(U) = (Gamma, Gamma^2/N + N).
NumericalFlux physical_flux(double N, double Gamma);

/// minmod(a, b) = 1/2 (sign(a) + sign(b)) min(|a|, |b|).
double minmod(double a, double b);

/// Slope-limited linear reconstruction, component-wise on (N, Gamma); the
/// Mach traces are formed from the reconstructed N and Gamma. Cells at the
/// ends of the array get zero slope (no neighbor on one side); callers that
/// need full stencils at every physical interface pass ghost-extended
/// arrays. Throws std::domain_error if a reconstructed density is
/// nonpositive, identifying the interface.
InterfaceStates muscl_reconstruct(std::span<const double> N,
                                  std::span<const double> Gamma, double dx);
InterfaceStates muscl_reconstruct(const FieldState& state, const Grid1D& grid);

/// True iff the linearized eigenvalue M-1 or M+1 changes sign across the
/// interface (sonic transition needing the entropy correction).
bool needs_entropy_fix(double M_l, double M_r);

/// Approximate Godunov flux from the Riemann problem linearized in the
/// nonconservative variables (N, M) at the arithmetic means. Returns nullopt
/// when the sampled interface density is nonpositive (vacuum-adjacent data).
std::optional<NumericalFlux> try_vfroe_ncv_flux(double N_l, double Gamma_l,
                                                double N_r, double Gamma_r);

/// As try_vfroe_ncv_flux, throwing std::domain_error on interface vacuum.
NumericalFlux vfroe_ncv_flux(double N_l, double Gamma_l, double N_r,
                             double Gamma_r);

/// Rusanov flux with speed max(|M_l|, |M_r|) + 1. The standard dissipative
/// sign subtracts s/2 times the state jump; paper_literal_sign adds it
/// instead (kept only for comparison runs).
NumericalFlux rusanov_flux(double N_l, double Gamma_l, double N_r,
                           double Gamma_r, bool paper_literal_sign = false);

struct FluxOptions {
    bool paper_literal_rusanov = false;
};

struct FluxCounters {
    std::size_t entropy_fix = 0;
    std::size_t positivity_fallback = 0;
};

/// The production interface flux: VFRoe-ncv, replaced by Rusanov at sonic
/// interfaces (entropy correction) and on interface vacuum (counted).
NumericalFlux interface_flux(double N_l, double Gamma_l, double N_r,
                             double Gamma_r, const FluxOptions& options,
                             FluxCounters& counters);

/// Variants for the flux-cutoff system: alpha rides along as a third
/// characteristic unknown with zero wave speed, and the flux of both
/// components is scaled by the interface mean of alpha. With
/// alpha_l = alpha_r = 1 these reduce exactly to the plain fluxes.
std::optional<NumericalFlux> try_vfroe_ncv_flux_alpha(double N_l, double Gamma_l,
                                                      double alpha_l, double N_r,
                                                      double Gamma_r,
                                                      double alpha_r);
NumericalFlux rusanov_flux_alpha(double N_l, double Gamma_l, double alpha_l,
                                 double N_r, double Gamma_r, double alpha_r,
                                 bool paper_literal_sign = false);
NumericalFlux interface_flux_alpha(double N_l, double Gamma_l, double alpha_l,
                                   double N_r, double Gamma_r, double alpha_r,
                                   const FluxOptions& options,
                                   FluxCounters& counters);

}  // namespace solfv
