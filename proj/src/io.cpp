#include "wgnls/io.hpp"

#include "wgnls/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace wgnls {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

namespace {

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex(const unsigned char* digest, unsigned int n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) {
    out.push_back(digits[digest[i] >> 4]);
    out.push_back(digits[digest[i] & 0xf]);
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw Error(ErrorCode::io_error, "SHA-256 initialization failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
  std::string finish() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_DigestFinal_ex(ctx_, digest, &n);
    return hex(digest, n);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

CsvWriter::CsvWriter(const fs::path& path, const std::string& grid, std::vector<std::string> columns)
    : out_(open_output(path)), width_(columns.size()) {
  out_ << "# grid: " << grid << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  out_.flush();
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  row_text(fields);
}

void CsvWriter::row_text(const std::vector<std::string>& fields) {
  if (fields.size() != width_) throw Error(ErrorCode::invalid_argument, "CSV row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
  out_ << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::io_error, "CSV write failed");
}

void CsvWriter::close() { out_.close(); }

void write_report_csv(const fs::path& path, const ProbeReport& report,
                      const std::vector<std::string>& columns) {
  std::vector<std::vector<double>> data;
  for (const auto& c : columns) data.push_back(report.column(c));
  CsvWriter csv(path, report.grid, columns);
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    std::vector<double> row;
    for (const auto& col : data) row.push_back(col[r]);
    csv.row(row);
  }
  csv.close();
}

void write_report_json(const fs::path& path, const ProbeReport& report) {
  json j;
  j["experiment"] = report.experiment;
  j["grid"] = report.grid;
  j["seed"] = report.seed;
  j["parameters"] = json::object();
  for (const auto& [k, v] : report.parameters) j["parameters"][k] = number_or_null(v);
  j["columns"] = report.columns;
  j["rows"] = json::array();
  for (const auto& row : report.rows) {
    json r = json::array();
    for (double v : row) r.push_back(number_or_null(v));
    j["rows"].push_back(std::move(r));
  }
  j["fits"] = json::object();
  for (const auto& f : report.fits) {
    j["fits"][f.name] = {{"slope", number_or_null(f.fit.slope)},
                         {"intercept", number_or_null(f.fit.intercept)},
                         {"r_squared", number_or_null(f.fit.r_squared)},
                         {"residual_rms", number_or_null(f.fit.residual_rms)},
                         {"points", f.fit.points}};
  }
  j["summary"] = json::object();
  for (const auto& [k, v] : report.summary) j["summary"][k] = number_or_null(v);
  j["notes"] = report.notes;
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "JSON write failed");
}

std::string sha256_hex(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  Sha256 sha;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    sha.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return sha.finish();
}

std::string sha256_hex_string(const std::string& data) {
  Sha256 sha;
  sha.update(data.data(), data.size());
  return sha.finish();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

SnapshotWriter::SnapshotWriter(const fs::path& path, const GridSpec& grid, double dt, int stride)
    : out_(open_output(path, std::ios::out | std::ios::binary)), size_(grid.size()) {
  std::ostringstream header;
  header << grid.describe() << '\n'
         << "dt=" << format_number(dt) << '\n'
         << "stride=" << stride << '\n'
         << "size=" << grid.size() << '\n';
  const std::string text = header.str();
  const std::uint32_t tag = 0x01020304u;
  const auto length = static_cast<std::uint32_t>(text.size());
  out_.write("WGNLSNP1", 8);
  out_.write(reinterpret_cast<const char*>(&tag), sizeof tag);
  out_.write(reinterpret_cast<const char*>(&length), sizeof length);
  out_.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void SnapshotWriter::write(double t, const SpectralField& f) {
  if (f.coeffs().size() != size_) throw Error(ErrorCode::invalid_argument, "snapshot size mismatch");
  out_.write(reinterpret_cast<const char*>(&t), sizeof t);
  out_.write(reinterpret_cast<const char*>(f.coeffs().data()),
             static_cast<std::streamsize>(size_ * sizeof(Complex)));
  if (!out_) throw Error(ErrorCode::io_error, "snapshot write failed");
}

void SnapshotWriter::close() { out_.close(); }

RunManifest write_manifest(const fs::path& dir, RunManifest manifest,
                           const std::vector<std::string>& files) {
  manifest.outputs.clear();
  for (const auto& f : files) {
    const fs::path p = dir / f;
    manifest.outputs.push_back({f, fs::file_size(p), sha256_hex(p)});
  }
  json j;
  j["version"] = manifest.version;
  j["experiment"] = manifest.experiment;
  j["grid"] = manifest.grid;
  j["grid_hash"] = manifest.grid_hash;
  j["config"] = json::object();
  for (const auto& [k, v] : manifest.config) j["config"][k] = v;
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  j["wall_seconds"] = manifest.wall_seconds;
  j["outputs"] = json::array();
  for (const auto& e : manifest.outputs)
    j["outputs"].push_back({{"file", e.file}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  // Written under a temporary name and renamed, so a manifest is never partial.
  const fs::path tmp = dir / "manifest.json.tmp";
  {
    auto out = open_output(tmp);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::io_error, "manifest write failed");
  }
  fs::rename(tmp, dir / "manifest.json");
  return manifest;
}

}  // namespace wgnls
