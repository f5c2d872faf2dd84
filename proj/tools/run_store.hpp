#pragma once

// Run persistence for the command-line tool: flat key=value configs, CSV
// formatting, the JSON manifest and atomic file writes.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sharplab::cli {

/// "%.17g"; nan and inf spelled as such.
std::string fmt(double x);

/// Flat key=value lines; '#' starts a comment, blank lines are skipped.
/// Throws std::invalid_argument on malformed lines or duplicate keys.
std::map<std::string, std::string> parse_config(const std::string& text);

std::string read_file(const std::filesystem::path& p);
std::string sha256_hex(const std::string& bytes);

/// Writes to "<path>.tmp" and renames over path.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Default output root: $SHARPLAB_RESULTS_DIR if set, else ./results.
std::filesystem::path results_root();
/// <root>/<UTC timestamp>-<command>, with -2, -3, ... appended if taken.
std::filesystem::path default_run_dir(const std::string& command, const std::string& timestamp);
std::string utc_timestamp();

struct OutputFile {
  std::string name;      // relative to the run directory
  std::string content;
};

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;       // resolved, as strings
  std::string version;
  std::string timestamp;
  std::map<std::string, std::string> input_hashes;  // path -> sha256
  std::vector<std::string> outputs;
  std::map<std::string, std::string> summary;      // headline numbers, formatted
};

std::string to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

/// Writes every output, then manifest.json listing them. Returns the paths
/// written, manifest last.
std::vector<std::filesystem::path> persist_run(const std::filesystem::path& dir, RunManifest manifest,
                                               const std::vector<OutputFile>& outputs);

/// Plot data: '#'-prefixed sidecar lines describing each column, then a CSV
/// header and the rows. Throws std::invalid_argument on empty rows or a
/// row of the wrong width.
std::string plot_csv(const std::vector<std::string>& columns, const std::vector<std::string>& descriptions,
                     const std::vector<std::vector<double>>& rows);

}  // namespace sharplab::cli
