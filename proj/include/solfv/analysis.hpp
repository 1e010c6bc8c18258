#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solfv/cases.hpp"
#include "solfv/grid.hpp"
#include "solfv/scheme.hpp"

namespace solfv {

enum class Variable { N, Gamma, DxN, DxGamma };
enum class Region { Plasma, Limiter };
enum class Norm { L1, L2 };

std::string variable_name(Variable v);
std::string region_name(Region r);
std::string norm_name(Norm n);

/// Cells whose centers fall inside any closed [lo, hi] interval are dropped
/// from both regions (e.g. the alpha != 1 zone of the two-sided study).
struct RegionSpec {
    std::vector<std::pair<double, double>> exclude;
};

/// Error norms for the four variables, split by region. Regions with no
/// included cells are absent; get() throws on them.
struct ErrorReport {
    double values[4][2][2] = {};
    bool has_plasma = false;
    bool has_limiter = false;
    double eps = 0.0;
    double dx = 0.0;
    double t = 0.0;
    std::string scheme;

    double get(Variable v, Region r, Norm n) const;
    double& at(Variable v, Region r, Norm n);
    bool has(Region r) const;
};

/// Region-split L1 = sum |d_i| dx and L2 = sqrt(sum d_i^2 dx) of the cell
/// differences and of their discrete x-derivatives. Derivatives use centered
/// differences inside each maximal run of included same-region cells and
/// one-sided differences at run edges, on state and reference alike, so no
/// stencil crosses the plasma-limiter interface; one-cell runs contribute
/// zero. Throws std::invalid_argument when a present region is emptied.
ErrorReport error_norms(const FieldState& state, const ReferenceField& reference,
                        const Grid1D& grid, const RegionMask& mask,
                        const RegionSpec& region_spec = {});

struct ThicknessReport {
    double thickness = 0.0;
    bool saturated = false;
};

/// Thickness of the penalty boundary layer: walking from the interface into
/// the first limiter run, the layer ends at the first cell with
/// |N_i - target| < 0.01 |N_I - target| (N_I from the adjacent plasma
/// cell); the distance from the interface to that cell center is returned,
/// so a profile already at the target reports dx/2. A profile that never
/// meets the 1% criterion reports the limiter width, flagged saturated.
ThicknessReport boundary_layer_thickness(const FieldState& state,
                                         const Grid1D& grid,
                                         const RegionMask& mask, double target);

/// Fires when max |M_i| exceeds the threshold or any field value is
/// non-finite (reported as infinite Mach).
std::optional<BlowUpEvent> blow_up_detector(const FieldState& state,
                                            double threshold);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    std::size_t n_used = 0;
    std::vector<double> eps_used;
};

/// Least-squares fit of log(error) against log(eps). Points with a
/// nonpositive coordinate are excluded; fewer than 3 surviving points throw
/// std::invalid_argument.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

}  // namespace solfv
