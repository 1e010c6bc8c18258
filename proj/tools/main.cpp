#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "solfv/driver.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    bool emit_plots = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path,
                    "path to a key = value config file")
        ->required();
    cmd->add_option("--out", args.out_dir,
                    "output directory (overrides out_dir from the config)");
    cmd->add_flag("--emit-plots", args.emit_plots,
                  "also write a gnuplot script next to the CSVs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "finite-volume solver for 1D plasma transport with volume-penalized "
        "limiter obstacles"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, mesh_args, eta_args;
    CLI::App* run = app.add_subcommand(
        "run", "single simulation: profile snapshots and blow-up record");
    add_common(run, run_args);
    CLI::App* sweep = app.add_subcommand(
        "sweep-eps",
        "penalty-parameter sweep: errors, convergence rates, layer thickness");
    add_common(sweep, sweep_args);
    CLI::App* mesh = app.add_subcommand(
        "mesh-study", "mesh refinement study: per-mesh errors and rates");
    add_common(mesh, mesh_args);
    CLI::App* eta = app.add_subcommand(
        "eta-study", "Mach-margin study: first-order onset per eta");
    add_common(eta, eta_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            solfv::RunConfig c = solfv::parse_run_config(run_args.config_path);
            if (!run_args.out_dir.empty()) c.out_dir = run_args.out_dir;
            return solfv::cmd_run(c, run_args.emit_plots);
        }
        if (*sweep) {
            solfv::SweepConfig c =
                solfv::parse_sweep_config(sweep_args.config_path);
            if (!sweep_args.out_dir.empty()) c.base.out_dir = sweep_args.out_dir;
            return solfv::cmd_sweep_eps(c, sweep_args.emit_plots);
        }
        if (*mesh) {
            solfv::MeshStudyConfig c =
                solfv::parse_mesh_study_config(mesh_args.config_path);
            if (!mesh_args.out_dir.empty()) c.base.out_dir = mesh_args.out_dir;
            return solfv::cmd_mesh_study(c, mesh_args.emit_plots);
        }
        if (*eta) {
            solfv::EtaStudyConfig c =
                solfv::parse_eta_study_config(eta_args.config_path);
            if (!eta_args.out_dir.empty()) {
                c.sweep.base.out_dir = eta_args.out_dir;
            }
            return solfv::cmd_eta_study(c, eta_args.emit_plots);
        }
    } catch (const solfv::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
