#include "solfv/driver.hpp"

#include <cmath>
#include <filesystem>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "solfv/analysis.hpp"
#include "solfv/output.hpp"

namespace solfv {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSnapshotHeader = "t,x,N,Gamma,M";
constexpr const char* kErrorsHeader =
    "scheme,eps,dx,variable,region,norm,error";
constexpr const char* kRatesHeader =
    "scheme,variable,region,norm,slope,intercept,residual,n_points";
constexpr const char* kBlowUpHeader =
    "scheme,eps,n_cells,t_stop,cell_index,max_abs_M";
constexpr const char* kThicknessHeader = "scheme,eps,dx,thickness,saturated";
constexpr const char* kMeshErrorsHeader =
    "scheme,n_cells,dx,variable,region,norm,error";
constexpr const char* kEtaHeader = "eta,m0,largest_eps,slope,n_points";

/// Everything one run needs, heap-pinning the case so the boundary
/// condition's pointer survives moves.
struct RunSetup {
    GridBuildResult gb;
    std::unique_ptr<ManufacturedCase> mc;
    PenaltyScheme scheme;
    BoundaryCondition bc;
};

RunSetup make_setup(const RunConfig& c) {
    const GeometrySpec spec = geometry_spec(c.geometry);
    RunSetup s;
    try {
        s.gb = build_grid(spec.x_min, spec.x_max, effective_n_cells(c),
                          spec.limiter);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("grid: " + std::string(e.what()));
    }
    s.mc = std::make_unique<ManufacturedCase>(
        make_case(c.case_name, c.m0, c.stationary_S));
    s.scheme.kind = c.scheme;
    s.scheme.epsilon = c.epsilon;
    s.scheme.M0 = c.m0;
    s.scheme.mask = s.gb.mask;
    s.scheme.two_fields_form = c.two_fields_form;
    s.scheme.strict_paper_stepping = c.strict_paper_stepping;
    s.scheme.use_muscl = c.use_muscl;
    s.scheme.flux_options.paper_literal_rusanov = c.paper_literal_rusanov;
    s.bc.left = c.bc_left;
    s.bc.right = c.bc_right;
    s.bc.dirichlet_case = s.mc.get();
    s.bc.M0 = c.m0;
    return s;
}

RunHooks make_hooks(const RunConfig& c) {
    RunHooks hooks;
    hooks.cfl = c.cfl;
    hooks.blow_up_threshold = c.blow_up_threshold;
    return hooks;
}

RegionSpec region_spec_for(const RunConfig& c) {
    RegionSpec spec;
    if (c.geometry == Geometry::TwoSided) {
        spec.exclude.push_back({-0.075, 0.075});
    }
    return spec;
}

void add_blow_up_row(CsvFile& csv, const std::string& scheme, double eps,
                     std::size_t n_cells, const BlowUpEvent& ev) {
    csv.add_row({scheme, format_double(eps), std::to_string(n_cells),
                 format_double(ev.time), std::to_string(ev.cell),
                 format_double(ev.max_abs_M)});
}

/// Schemes that relax the limiter density toward zero and so grow a
/// measurable boundary layer there.
bool relaxes_density(SchemeKind kind) {
    return kind == SchemeKind::Isoardi || kind == SchemeKind::TwoFields;
}

/// Scheme-aware analytic reference: the density-relaxing schemes drive both
/// limiter fields to zero as eps -> 0, so zero is their limiter-region
/// limit, not the advected trace.
ReferenceField scheme_reference(SchemeKind kind, const ManufacturedCase& mc,
                                const Grid1D& grid, const RegionMask& mask,
                                double t) {
    ReferenceField ref = analytic_reference(mc, grid, mask, t);
    if (relaxes_density(kind)) {
        for (std::size_t i = 0; i < grid.n_cells; ++i) {
            if (mask.chi[i] != 0.0) {
                ref.N[i] = 0.0;
                ref.Gamma[i] = 0.0;
            }
        }
    }
    return ref;
}

void append_rate_rows(CsvFile& rates, const std::string& scheme,
                      const std::vector<ErrorReport>& reports,
                      const std::vector<double>& abscissa) {
    for (Variable v : {Variable::N, Variable::Gamma, Variable::DxN,
                       Variable::DxGamma}) {
        for (Region r : {Region::Plasma, Region::Limiter}) {
            for (Norm n : {Norm::L1, Norm::L2}) {
                std::vector<std::pair<double, double>> points;
                for (std::size_t i = 0; i < reports.size(); ++i) {
                    if (!reports[i].has(r)) continue;
                    points.push_back({abscissa[i], reports[i].get(v, r, n)});
                }
                try {
                    append_rate_row(rates, scheme, v, r, n, fit_rate(points));
                } catch (const std::invalid_argument&) {
                    // fewer than 3 usable points: no rate to report
                }
            }
        }
    }
}

struct SweepOutcome {
    std::vector<double> eps_done;
    std::vector<ErrorReport> reports;
    std::vector<ThicknessReport> layers;  ///< parallel to eps_done when used
    std::optional<std::pair<double, BlowUpEvent>> blow_up;  ///< eps, event
};

/// Runs the eps ladder on one fixed mesh against one reference; stops at the
/// first blow-up.
SweepOutcome run_sweep(const SweepConfig& sc, const RunSetup& s) {
    const RunConfig& base = sc.base;
    const Grid1D& grid = s.gb.grid;
    SweepOutcome out;

    ReferenceField ref;
    if (sc.reference == ReferenceKind::Analytic) {
        ref = scheme_reference(base.scheme, *s.mc, grid, s.gb.mask, base.t_end);
    } else {
        FieldState state = s.mc->initial_state(grid);
        PenaltyScheme scheme = s.scheme;
        scheme.epsilon = sc.eps_ref;
        const RunLog log =
            run_until(state, base.t_end, grid, scheme, *s.mc, s.bc,
                      make_hooks(base));
        if (log.blow_up) {
            out.blow_up = {sc.eps_ref, *log.blow_up};
            return out;
        }
        ref = NumericalReference(grid, std::move(state)).at(grid);
    }

    const RegionSpec rspec = region_spec_for(base);
    const bool track_layer =
        relaxes_density(base.scheme) && s.gb.mask.has_limiter();
    for (double eps : sc.eps_list) {
        FieldState state = s.mc->initial_state(grid);
        PenaltyScheme scheme = s.scheme;
        scheme.epsilon = eps;
        const RunLog log = run_until(state, base.t_end, grid, scheme, *s.mc,
                                     s.bc, make_hooks(base));
        if (log.blow_up) {
            out.blow_up = {eps, *log.blow_up};
            return out;
        }
        ErrorReport report = error_norms(state, ref, grid, s.gb.mask, rspec);
        report.eps = eps;
        report.scheme = scheme_name(base.scheme);
        out.eps_done.push_back(eps);
        out.reports.push_back(std::move(report));
        if (track_layer) {
            out.layers.push_back(
                boundary_layer_thickness(state, grid, s.gb.mask, 0.0));
        }
    }
    return out;
}

}  // namespace

int cmd_run(const RunConfig& c, bool emit_plots) {
    const RunSetup s = make_setup(c);
    const fs::path dir = c.out_dir;
    std::vector<fs::path> files;

    write_file_atomic(dir / "resolved_config.cfg", serialize_run_config(c));
    files.push_back(dir / "resolved_config.cfg");

    FieldState state = s.mc->initial_state(s.gb.grid);
    CsvFile snapshot(dir / "snapshot.csv", kSnapshotHeader);
    append_snapshot_rows(snapshot, state, s.gb.grid);
    std::size_t last_snap_step = 0;

    RunHooks hooks = make_hooks(c);
    if (c.snapshot_every > 0) {
        hooks.on_step = [&](std::size_t step, const FieldState& st,
                            const StepReport&) {
            if (step % c.snapshot_every == 0) {
                append_snapshot_rows(snapshot, st, s.gb.grid);
                last_snap_step = step;
            }
        };
    }

    const RunLog log =
        run_until(state, c.t_end, s.gb.grid, s.scheme, *s.mc, s.bc, hooks);
    if (log.steps != last_snap_step) {
        append_snapshot_rows(snapshot, state, s.gb.grid);
    }
    snapshot.write();
    files.push_back(snapshot.path());

    if (log.blow_up) {
        CsvFile blowup(dir / "blowup.csv", kBlowUpHeader);
        add_blow_up_row(blowup, scheme_name(c.scheme), c.epsilon,
                        s.gb.grid.n_cells, *log.blow_up);
        blowup.write();
        files.push_back(blowup.path());
    }
    if (emit_plots) {
        write_plot_script(dir);
        files.push_back(dir / "plots.gp");
    }
    write_manifest(dir, std::move(files));
    return log.blow_up ? 3 : 0;
}

int cmd_sweep_eps(const SweepConfig& sc, bool emit_plots) {
    const RunSetup s = make_setup(sc.base);
    const fs::path dir = sc.base.out_dir;
    std::vector<fs::path> files;

    const SweepOutcome out = run_sweep(sc, s);
    const std::string scheme = scheme_name(sc.base.scheme);

    CsvFile errors(dir / "errors.csv", kErrorsHeader);
    for (const ErrorReport& report : out.reports) {
        append_error_rows(errors, report);
    }
    errors.write();
    files.push_back(errors.path());

    if (!out.layers.empty()) {
        CsvFile thickness(dir / "thickness.csv", kThicknessHeader);
        for (std::size_t i = 0; i < out.layers.size(); ++i) {
            thickness.add_row({scheme, format_double(out.eps_done[i]),
                               format_double(s.gb.grid.dx),
                               format_double(out.layers[i].thickness),
                               out.layers[i].saturated ? "1" : "0"});
        }
        thickness.write();
        files.push_back(thickness.path());
    }

    if (out.blow_up) {
        CsvFile blowup(dir / "blowup.csv", kBlowUpHeader);
        add_blow_up_row(blowup, scheme, out.blow_up->first, s.gb.grid.n_cells,
                        out.blow_up->second);
        blowup.write();
        files.push_back(blowup.path());
    } else {
        CsvFile rates(dir / "rates.csv", kRatesHeader);
        append_rate_rows(rates, scheme, out.reports, out.eps_done);
        rates.write();
        files.push_back(rates.path());
    }
    if (emit_plots) {
        write_plot_script(dir);
        files.push_back(dir / "plots.gp");
    }
    write_manifest(dir, std::move(files));
    return out.blow_up ? 3 : 0;
}

int cmd_mesh_study(const MeshStudyConfig& mc, bool emit_plots) {
    const fs::path dir = mc.base.out_dir;
    std::vector<fs::path> files;
    const std::string scheme = scheme_name(mc.base.scheme);

    CsvFile mesh_errors(dir / "mesh_errors.csv", kMeshErrorsHeader);
    CsvFile blowup(dir / "blowup.csv", kBlowUpHeader);
    std::vector<ErrorReport> reports;
    std::vector<double> dx_done;
    bool any_blow_up = false;

    for (std::size_t n : mc.mesh_list) {
        RunConfig c = mc.base;
        c.n_cells = n;
        const RunSetup s = make_setup(c);
        FieldState state = s.mc->initial_state(s.gb.grid);
        const RunLog log = run_until(state, c.t_end, s.gb.grid, s.scheme,
                                     *s.mc, s.bc, make_hooks(c));
        if (log.blow_up) {
            any_blow_up = true;
            add_blow_up_row(blowup, scheme, c.epsilon, n, *log.blow_up);
            continue;
        }
        const ReferenceField ref =
            scheme_reference(c.scheme, *s.mc, s.gb.grid, s.gb.mask, c.t_end);
        ErrorReport report =
            error_norms(state, ref, s.gb.grid, s.gb.mask, region_spec_for(c));
        report.eps = c.epsilon;
        report.scheme = scheme;
        const std::string n_str = std::to_string(n);
        const std::string dx_str = format_double(s.gb.grid.dx);
        for (Variable v : {Variable::N, Variable::Gamma, Variable::DxN,
                           Variable::DxGamma}) {
            for (Region r : {Region::Plasma, Region::Limiter}) {
                if (!report.has(r)) continue;
                for (Norm nm : {Norm::L1, Norm::L2}) {
                    mesh_errors.add_row(
                        {scheme, n_str, dx_str, variable_name(v),
                         region_name(r), norm_name(nm),
                         format_double(report.get(v, r, nm))});
                }
            }
        }
        dx_done.push_back(s.gb.grid.dx);
        reports.push_back(std::move(report));
    }

    mesh_errors.write();
    files.push_back(mesh_errors.path());
    if (any_blow_up) {
        blowup.write();
        files.push_back(blowup.path());
    }
    if (reports.size() >= 3) {
        CsvFile rates(dir / "mesh_rates.csv", kRatesHeader);
        append_rate_rows(rates, scheme, reports, dx_done);
        rates.write();
        files.push_back(rates.path());
    }
    if (emit_plots) {
        write_plot_script(dir);
        files.push_back(dir / "plots.gp");
    }
    write_manifest(dir, std::move(files));
    return any_blow_up ? 3 : 0;
}

int cmd_eta_study(const EtaStudyConfig& ec, bool emit_plots) {
    const fs::path dir = ec.sweep.base.out_dir;
    std::vector<fs::path> files;

    CsvFile summary(dir / "eta_summary.csv", kEtaHeader);
    bool any_blow_up = false;
    for (double eta : ec.eta_list) {
        SweepConfig sc = ec.sweep;
        sc.base.m0 = 1.0 - eta;
        const RunSetup s = make_setup(sc.base);
        const SweepOutcome out = run_sweep(sc, s);
        if (out.blow_up) any_blow_up = true;

        // Plasma L1(N) against eps; the deepest suffix whose fitted slope
        // sits in [0.8, 1.2] locates the onset of the first-order regime.
        std::vector<std::pair<double, double>> points;
        for (std::size_t i = 0; i < out.reports.size(); ++i) {
            points.push_back({out.eps_done[i],
                              out.reports[i].get(Variable::N, Region::Plasma,
                                                 Norm::L1)});
        }
        double largest_eps = 0.0;
        double slope = std::nan("");
        std::size_t n_points = 0;
        if (points.size() >= 3) {
            for (std::size_t start = 0; start + 3 <= points.size(); ++start) {
                const std::vector<std::pair<double, double>> tail(
                    points.begin() + static_cast<std::ptrdiff_t>(start),
                    points.end());
                const RateFit fit = fit_rate(tail);
                slope = fit.slope;
                n_points = fit.n_used;
                if (fit.slope >= 0.8 && fit.slope <= 1.2) {
                    largest_eps = tail.front().first;
                    break;
                }
            }
        }
        summary.add_row({format_double(eta), format_double(sc.base.m0),
                         format_double(largest_eps), format_double(slope),
                         std::to_string(n_points)});
    }
    summary.write();
    files.push_back(summary.path());
    if (emit_plots) {
        write_plot_script(dir);
        files.push_back(dir / "plots.gp");
    }
    write_manifest(dir, std::move(files));
    return any_blow_up ? 3 : 0;
}

}  // namespace solfv
