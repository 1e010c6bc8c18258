#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "solfv/analysis.hpp"
#include "solfv/grid.hpp"

namespace solfv {

/// %.17g rendering: enough digits to round-trip a double exactly, so equal
/// runs produce byte-identical files.
std::string format_double(double v);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16-digit lowercase hex rendering of a hash.
std::string hex64(std::uint64_t v);

/// Writes text via a temporary file and rename, so readers never observe a
/// partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

/// CSV assembled in memory row by row, flushed atomically by write(). Rows
/// must match the header's column count.
class CsvFile {
  public:
    CsvFile(std::filesystem::path path, std::string_view header);

    void add_row(const std::vector<std::string>& cells);
    void write() const;

    const std::filesystem::path& path() const { return path_; }
    const std::string& text() const { return text_; }

  private:
    std::filesystem::path path_;
    std::string text_;
    std::size_t n_columns_;
};

/// One row per cell: t,x,N,Gamma,M.
void append_snapshot_rows(CsvFile& csv, const FieldState& state,
                          const Grid1D& grid);

/// One row per present (variable, region, norm):
/// scheme,eps,dx,variable,region,norm,error.
void append_error_rows(CsvFile& csv, const ErrorReport& report);

/// scheme,variable,region,norm,slope,intercept,residual,n_points.
void append_rate_row(CsvFile& csv, const std::string& scheme, Variable v,
                     Region r, Norm n, const RateFit& fit);

/// Writes manifest.csv (file,bytes,fnv1a64) covering the given files, sorted
/// by name; paths are stored relative to dir.
void write_manifest(const std::filesystem::path& dir,
                    std::vector<std::filesystem::path> files);

/// Emits plots.gp rendering whichever of the known CSVs exist in dir.
void write_plot_script(const std::filesystem::path& dir);

}  // namespace solfv
