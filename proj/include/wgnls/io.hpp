#pragma once

// Output files: CSV tables, JSON reports, binary snapshots and the run
// manifest.

#include "wgnls/grid.hpp"
#include "wgnls/probes.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace wgnls {

/// 17 significant digits; NaN becomes the empty string.
std::string format_number(double v);

/// Streams rows to a CSV file. The first line is "# grid: <description>",
/// the second the column header; every row is flushed when written.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& grid,
            std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  /// Row of preformatted fields.
  void row_text(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::size_t width_;
};

/// Writes the named columns of `report`, in the given order.
void write_report_csv(const std::filesystem::path& path, const ProbeReport& report,
                      const std::vector<std::string>& columns);

/// JSON mirror of the report. Wall-clock time is left out so that equal
/// inputs give byte-identical files.
void write_report_json(const std::filesystem::path& path, const ProbeReport& report);

std::string sha256_hex(const std::filesystem::path& path);

/// Binary trajectory dump; layout documented in the README.
class SnapshotWriter {
 public:
  SnapshotWriter(const std::filesystem::path& path, const GridSpec& grid, double dt, int stride);
  void write(double t, const SpectralField& f);
  void close();

 private:
  std::ofstream out_;
  Eigen::Index size_;
};

struct ManifestEntry {
  std::string file;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> config;
  std::string version;
  std::string experiment;
  std::string grid;
  std::string grid_hash;
  std::string started;
  std::string finished;
  double wall_seconds = 0.0;
  std::vector<ManifestEntry> outputs;
};

/// Digests every listed file in `dir`, then writes manifest.json last.
RunManifest write_manifest(const std::filesystem::path& dir, RunManifest manifest,
                           const std::vector<std::string>& files);

std::string sha256_hex_string(const std::string& data);
std::string utc_timestamp();

}  // namespace wgnls
