#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solfv/boundary.hpp"
#include "solfv/cases.hpp"
#include "solfv/scheme.hpp"

namespace solfv {

/// Geometry fixes the domain, the limiter interval, and the BC defaults:
/// OneSided is [0, 0.5] with the limiter (0.4, 0.5) (symmetry left, exact
/// Dirichlet right), TwoSided is [-0.5, 0.5] with the limiter (-0.1, 0.1)
/// (periodic), PlasmaOnly is the bare plasma interval [0, 0.4] (exact
/// Dirichlet both sides).
enum class Geometry { OneSided, TwoSided, PlasmaOnly };

/// Parse or validation failure; the message carries file:line when the
/// offending key is known.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Geometry geometry = Geometry::OneSided;
    SchemeKind scheme = SchemeKind::Optimal;
    std::string case_name = "regular";
    double epsilon = 1e-3;
    double m0 = 0.9;
    double stationary_S = 1.0;
    std::size_t n_cells = 0;  ///< 0 = geometry default (dx = 1e-3)
    double cfl = 0.8;
    double t_end = 1.0;
    BcKind bc_left = BcKind::Symmetry;
    BcKind bc_right = BcKind::ExactDirichlet;
    std::string out_dir = "out";
    bool paper_literal_rusanov = false;
    TwoFieldsForm two_fields_form = TwoFieldsForm::UpdateBlock;
    bool strict_paper_stepping = true;
    bool use_muscl = true;
    std::size_t snapshot_every = 0;  ///< steps between snapshots; 0 = final only
    double blow_up_threshold = 10.0;
};

struct SweepConfig {
    RunConfig base;
    std::vector<double> eps_list;  ///< strictly descending, >= 3 entries
    ReferenceKind reference = ReferenceKind::Analytic;
    double eps_ref = 1e-20;
};

struct MeshStudyConfig {
    RunConfig base;
    std::vector<std::size_t> mesh_list;  ///< strictly increasing, >= 3 entries
};

struct EtaStudyConfig {
    SweepConfig sweep;
    std::vector<double> eta_list;  ///< each in (0, 1); M0 = 1 - eta
};

/// Resolved geometry pieces derived from a validated RunConfig.
struct GeometrySpec {
    double x_min = 0.0;
    double x_max = 0.5;
    std::optional<LimiterSpec> limiter;
    std::size_t default_n_cells = 500;
};

GeometrySpec geometry_spec(Geometry g);
std::size_t effective_n_cells(const RunConfig& config);

/// Parsers for the key = value dialect (# comments, blank lines ignored).
/// Unknown or duplicate keys and malformed values throw ConfigError with a
/// file:line prefix; cross-field validation errors cite the file.
RunConfig parse_run_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& path);
MeshStudyConfig parse_mesh_study_config(const std::string& path);
EtaStudyConfig parse_eta_study_config(const std::string& path);

/// Round-trip serialization: parse_run_config of a file with this content
/// reproduces the config exactly.
std::string serialize_run_config(const RunConfig& config);

/// Enum spellings shared by the parser and the writers.
std::string geometry_name(Geometry g);
std::string scheme_name(SchemeKind k);
std::string bc_name(BcKind k);

}  // namespace solfv
