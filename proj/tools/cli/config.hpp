#pragma once

// Run configuration for the command-line tool.
//
// A config is a JSON document merged over a fixed defaults tree. Every key must exist
// in the defaults; sections stay objects. Overrides use dotted paths ("run.h=0.05")
// and their values are parsed as JSON, falling back to a plain string.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rushlarsen/rushlarsen.hpp"

namespace rushlarsen::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ProblemConfig {
  std::string kind;  // manufactured_smooth | manufactured_membrane | theta_split | beeler_reuter
  double lambda = -1.0;
  double theta = 1.0;
  double y0 = 1.0;
  double tau_min = 0.05;
  std::filesystem::path model_file;
  std::optional<double> horizon;
  std::optional<double> stim_amplitude, stim_start, stim_duration, stim_period;
};

struct RunConfig {
  nlohmann::json document;  // resolved tree, defaults filled in
  std::string digest;       // sha256 of document.dump()

  ProblemConfig problem;
  std::vector<SchemeSpec> schemes;  // `schemes` if given, else [scheme]
  double h = 0.01;
  IntegrateOptions integrate;

  std::vector<double> thetas;  // empty: per-order defaults
  std::optional<Rect> rect;    // empty: per-order defaults
  std::size_t n_re = 201, n_im = 201;
  double search_limit = -1e6;

  std::optional<double> h_ref;
  std::vector<int> m_list;
  std::optional<std::size_t> component;
  bool prefer_exact = true;

  double h_hi = 0.5;
  double tol = 1e-2;
  std::optional<double> scan_from;
  double growth = 1.1;
  std::optional<double> cap;

  unsigned workers = 0;
  std::uint64_t seed = 0;
};

/// The defaults tree; also the schema of accepted keys.
const nlohmann::json& default_document();

/// Merges `user` over `base`, rejecting keys absent from `base`.
void merge_strict(nlohmann::json& base, const nlohmann::json& user, const std::string& path = "");

/// Applies "a.b.c=value".
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads the optional config file (relative model paths resolve against its directory),
/// applies overrides, validates and fills the typed fields.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides);

RunConfig resolve(nlohmann::json document, const std::filesystem::path& base_dir);

std::string sha256_hex(const std::string& data);

/// Builds the problem named by the config; throws ConfigError on bad parameters.
SplitProblem make_problem(const ProblemConfig& config);

/// Default stability rectangle and theta set for a scheme order.
Rect default_rect(int order);
std::vector<double> default_thetas(int order);

}  // namespace rushlarsen::cli
