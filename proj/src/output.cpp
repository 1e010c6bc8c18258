#include "solfv/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace solfv {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

CsvFile::CsvFile(fs::path path, std::string_view header)
    : path_(std::move(path)), text_(header), n_columns_(1) {
    n_columns_ += static_cast<std::size_t>(
        std::count(header.begin(), header.end(), ','));
    text_ += '\n';
}

void CsvFile::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != n_columns_) {
        throw std::logic_error("CSV row width mismatch for " + path_.string());
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvFile::write() const { write_file_atomic(path_, text_); }

void append_snapshot_rows(CsvFile& csv, const FieldState& state,
                          const Grid1D& grid) {
    const std::string t = format_double(state.t);
    for (std::size_t i = 0; i < state.size(); ++i) {
        csv.add_row({t, format_double(grid.cell_center(i)),
                     format_double(state.N[i]), format_double(state.Gamma[i]),
                     format_double(state.M(i))});
    }
}

void append_error_rows(CsvFile& csv, const ErrorReport& report) {
    const std::string eps = format_double(report.eps);
    const std::string dx = format_double(report.dx);
    for (Variable v : {Variable::N, Variable::Gamma, Variable::DxN,
                       Variable::DxGamma}) {
        for (Region r : {Region::Plasma, Region::Limiter}) {
            if (!report.has(r)) continue;
            for (Norm n : {Norm::L1, Norm::L2}) {
                csv.add_row({report.scheme, eps, dx, variable_name(v),
                             region_name(r), norm_name(n),
                             format_double(report.get(v, r, n))});
            }
        }
    }
}

void append_rate_row(CsvFile& csv, const std::string& scheme, Variable v,
                     Region r, Norm n, const RateFit& fit) {
    csv.add_row({scheme, variable_name(v), region_name(r), norm_name(n),
                 format_double(fit.slope), format_double(fit.intercept),
                 format_double(fit.residual), std::to_string(fit.n_used)});
}

void write_manifest(const fs::path& dir, std::vector<fs::path> files) {
    std::sort(files.begin(), files.end());
    CsvFile manifest(dir / "manifest.csv", "file,bytes,fnv1a64");
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + file.string());
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        manifest.add_row({file.lexically_relative(dir).generic_string(),
                          std::to_string(bytes.size()), hex64(fnv1a64(bytes))});
    }
    manifest.write();
}

void write_plot_script(const fs::path& dir) {
    std::string gp =
        "# gnuplot script; run from this directory: gnuplot plots.gp\n"
        "set datafile separator ','\n"
        "set key outside\n"
        "set term pngcairo size 900,600\n";
    const auto have = [&](const char* name) { return fs::exists(dir / name); };
    if (have("snapshot.csv")) {
        gp +=
            "set output 'snapshot.png'\n"
            "set xlabel 'x'\n"
            "set title 'final profiles'\n"
            "plot 'snapshot.csv' skip 1 using 2:3 with lines title 'N', \\\n"
            "     'snapshot.csv' skip 1 using 2:5 with lines title 'M'\n";
    }
    if (have("errors.csv")) {
        gp +=
            "set output 'errors.png'\n"
            "set logscale xy\n"
            "set xlabel 'eps'\n"
            "set ylabel 'error'\n"
            "set title 'L1 error of N vs eps'\n"
            "plot '< grep \",N,plasma,L1,\" errors.csv' using 2:7 with "
            "linespoints title 'plasma', \\\n"
            "     '< grep \",N,limiter,L1,\" errors.csv' using 2:7 with "
            "linespoints title 'limiter'\n"
            "unset logscale\n";
    }
    if (have("mesh_errors.csv")) {
        gp +=
            "set output 'mesh_errors.png'\n"
            "set logscale xy\n"
            "set xlabel 'dx'\n"
            "set ylabel 'error'\n"
            "set title 'L1 error of N vs dx'\n"
            "plot '< grep \",N,plasma,L1,\" mesh_errors.csv' using 3:7 with "
            "linespoints title 'plasma'\n"
            "unset logscale\n";
    }
    if (have("thickness.csv")) {
        gp +=
            "set output 'thickness.png'\n"
            "set logscale xy\n"
            "set xlabel 'eps'\n"
            "set ylabel 'boundary layer thickness'\n"
            "plot 'thickness.csv' skip 1 using 2:4 with linespoints title "
            "'thickness'\n"
            "unset logscale\n";
    }
    write_file_atomic(dir / "plots.gp", gp);
}

}  // namespace solfv
