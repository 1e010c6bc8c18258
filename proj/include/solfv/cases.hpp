#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solfv/grid.hpp"

namespace solfv {

enum class ReferenceKind { Analytic, NumericalEps };

/// Analytic scenario bundle: exact fields, compatible sources (null inside
/// the limiter), and the limiter-region fields of the vanishing-penalty
/// limit used as reference there. All functions take (t, x).
struct ManufacturedCase {
    std::string name;
    std::function<double(double, double)> N_exact;
    std::function<double(double, double)> Gamma_exact;
    std::function<double(double, double)> S_N;
    std::function<double(double, double)> S_Gamma;
    /// Limiter-interior reference of the penalized problem's limit; falls
    /// back to the exact fields when empty.
    std::function<double(double, double)> N_ref_limiter;
    std::function<double(double, double)> Gamma_ref_limiter;
    ReferenceKind reference_kind = ReferenceKind::Analytic;
    double eps_ref = 1e-20;

    FieldState initial_state(const Grid1D& grid) const;
};

/// Smooth non-stationary solution with Mach M0 at the interface x = 0.4:
/// N = exp(-x^2 / (0.16 (t+1))), Gamma = M0 sin(pi x / 0.8) N. Sources are
/// the closed-form PDE residual of these fields, null for x > 0.4.
ManufacturedCase case_regular(double M0);

/// The same fields without the M0 factor (sonic interface, M(t, 0.4) = 1);
/// drives the flux-cut blow-up experiment.
ManufacturedCase case_isoardi();

/// Exact steady state with S_N = (1 - chi) S and S_Gamma = 0:
/// Gamma = S x and N = S (c + sqrt(c^2 - x^2)) with c = 0.2 (1/M0 + M0) for
/// |x| <= 0.4, extended by the interface-trace constants N = 0.4 S / M0,
/// Gamma = sign(x) 0.4 S beyond (an exact stationary solution of the
/// penalized system for every eps).
ManufacturedCase case_stationary(double S, double M0);

/// Mirror of case_regular for the centered two-sided limiter on
/// [-0.5, 0.5]: N(t,x) = N1(t, 0.5-|x|), Gamma(t,x) = -sign(x) Gamma1(t,
/// 0.5-|x|) (even N, odd Gamma, periodic-compatible). Sources null for
/// |x| < 0.1.
ManufacturedCase case_two_sided(double M0);

ManufacturedCase make_case(const std::string& name, double M0, double S = 1.0);

/// Per-cell reference fields on one mesh at one time.
struct ReferenceField {
    std::vector<double> N;
    std::vector<double> Gamma;
};

/// Samples the case's reference at cell centers: exact fields on plasma
/// cells, the limiter-limit fields on chi = 1 cells.
ReferenceField analytic_reference(const ManufacturedCase& c, const Grid1D& grid,
                                  const RegionMask& mask, double t);

/// Stored same-mesh numerical reference (a completed run at eps_ref).
class NumericalReference {
  public:
    NumericalReference(const Grid1D& grid, FieldState final_state);

    /// Throws std::invalid_argument on mesh mismatch.
    ReferenceField at(const Grid1D& grid) const;

  private:
    Grid1D grid_;
    FieldState state_;
};

}  // namespace solfv
