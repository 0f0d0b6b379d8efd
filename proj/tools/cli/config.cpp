#include "config.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef RUSHLARSEN_MODEL_DIR
#define RUSHLARSEN_MODEL_DIR "."
#endif

namespace rushlarsen::cli {

using nlohmann::json;

namespace {

// Build-tree data dir, else share/rushlarsen/models beside an installed binary.
std::filesystem::path default_model_file() {
  const std::filesystem::path built = std::filesystem::path(RUSHLARSEN_MODEL_DIR) / "beeler_reuter_1977.json";
  std::error_code ec;
  if (std::filesystem::exists(built, ec)) return built;
  const auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (ec) return built;
  const auto installed = exe.parent_path().parent_path() / "share" / "rushlarsen" / "models" / "beeler_reuter_1977.json";
  return std::filesystem::exists(installed, ec) ? installed : built;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& at_path(const json& doc, const std::string& path) {
  const json* node = &doc;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    node = &node->at(key);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return *node;
}

double number(const json& doc, const std::string& path) {
  const json& v = at_path(doc, path);
  if (!v.is_number()) throw ConfigError(path, "expected a number, got " + v.dump());
  return v.get<double>();
}

std::optional<double> optional_number(const json& doc, const std::string& path) {
  if (at_path(doc, path).is_null()) return std::nullopt;
  return number(doc, path);
}

double positive(const json& doc, const std::string& path) {
  const double v = number(doc, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

std::int64_t integer(const json& doc, const std::string& path) {
  const json& v = at_path(doc, path);
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer, got " + v.dump());
  return v.get<std::int64_t>();
}

bool boolean(const json& doc, const std::string& path) {
  const json& v = at_path(doc, path);
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false, got " + v.dump());
  return v.get<bool>();
}

std::string string(const json& doc, const std::string& path) {
  const json& v = at_path(doc, path);
  if (!v.is_string()) throw ConfigError(path, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

SchemeSpec scheme(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a scheme name such as \"RL3\"");
  try {
    return SchemeSpec::parse(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

const json& default_document() {
  static const json doc = json::parse(R"({
    "problem": {
      "kind": "manufactured_smooth",
      "lambda": -1.0,
      "theta": 1.0,
      "y0": 1.0,
      "tau_min": 0.05,
      "model_file": null,
      "horizon": null,
      "stimulation": { "amplitude": null, "start": null, "duration": null, "period": null }
    },
    "scheme": "RL2",
    "schemes": null,
    "run": { "h": 0.01, "constant_a": false, "blowup_bound": 1e6, "startup_substeps": 0 },
    "stability": {
      "thetas": null,
      "re_min": null, "re_max": null, "im_min": null, "im_max": null,
      "n_re": 201, "n_im": 201,
      "search_limit": -1e6
    },
    "converge": { "h_ref": null, "m_list": [5, 4, 3, 2], "component": null, "prefer_exact": true },
    "critical": { "h_hi": 0.5, "tol": 0.01, "scan_from": null, "growth": 1.1, "cap": null },
    "workers": 0,
    "seed": 0
  })");
  return doc;
}

void merge_strict(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string here = join(path, key);
    if (!base.contains(key)) throw ConfigError(here, "unknown key");
    json& slot = base[key];
    if (slot.is_object()) {
      merge_strict(slot, value, here);
    } else {
      slot = value;
    }
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", "override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  // Rebuild the override as a nested object so it goes through the same strict merge.
  json patch = value;
  std::size_t end = path.size();
  while (true) {
    const std::size_t dot = path.rfind('.', end - 1);
    const std::string key = path.substr(dot == std::string::npos ? 0 : dot + 1,
                                        end - (dot == std::string::npos ? 0 : dot + 1));
    if (key.empty()) throw ConfigError(path, "empty key in override");
    patch = json{{key, std::move(patch)}};
    if (dot == std::string::npos) break;
    end = dot;
  }
  merge_strict(doc, patch);
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

Rect default_rect(int order) {
  switch (order) {
    case 2: return {-6.0, 1.0, 0.0, 8.0};
    case 3: return {-250.0, 0.0, 0.0, 140.0};
    default: return {-90.0, 0.0, 0.0, 50.0};
  }
}

std::vector<double> default_thetas(int order) {
  if (order == 2) return {0.0, 0.5, 2.0 / 3.0, 0.7, 5.0 / 6.0, 2.0};
  return {0.0, 0.85, 0.9, 0.95, 1.05, 1.1};
}

RunConfig resolve(json document, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  const json& d = document;

  auto& p = cfg.problem;
  p.kind = string(d, "problem.kind");
  if (p.kind != "manufactured_smooth" && p.kind != "manufactured_membrane" && p.kind != "theta_split" &&
      p.kind != "beeler_reuter") {
    throw ConfigError("problem.kind", "unknown problem '" + p.kind + "'");
  }
  p.lambda = number(d, "problem.lambda");
  p.theta = number(d, "problem.theta");
  p.y0 = number(d, "problem.y0");
  p.tau_min = number(d, "problem.tau_min");
  p.horizon = optional_number(d, "problem.horizon");
  if (p.horizon && !(*p.horizon > 0.0)) throw ConfigError("problem.horizon", "must be positive");
  p.stim_amplitude = optional_number(d, "problem.stimulation.amplitude");
  p.stim_start = optional_number(d, "problem.stimulation.start");
  p.stim_duration = optional_number(d, "problem.stimulation.duration");
  p.stim_period = optional_number(d, "problem.stimulation.period");
  if (d["problem"]["model_file"].is_null()) {
    p.model_file = default_model_file();
  } else {
    p.model_file = string(d, "problem.model_file");
    if (p.model_file.is_relative()) p.model_file = base_dir / p.model_file;
  }

  if (d["schemes"].is_null()) {
    cfg.schemes.push_back(scheme(d["scheme"], "scheme"));
  } else {
    if (!d["schemes"].is_array() || d["schemes"].empty()) throw ConfigError("schemes", "expected a non-empty list");
    for (std::size_t i = 0; i < d["schemes"].size(); ++i) {
      cfg.schemes.push_back(scheme(d["schemes"][i], "schemes[" + std::to_string(i) + "]"));
    }
  }
  const bool constant_a = boolean(d, "run.constant_a");
  for (auto& s : cfg.schemes) s.constant_a = constant_a && s.family == Family::RushLarsen;

  cfg.h = positive(d, "run.h");
  cfg.integrate.blowup_bound = positive(d, "run.blowup_bound");
  const auto substeps = integer(d, "run.startup_substeps");
  if (substeps < 0) throw ConfigError("run.startup_substeps", "must be >= 0");
  cfg.integrate.startup_substeps = static_cast<int>(substeps);

  const json& thetas = d["stability"]["thetas"];
  if (!thetas.is_null()) {
    if (!thetas.is_array() || thetas.empty()) throw ConfigError("stability.thetas", "expected a non-empty list");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (!thetas[i].is_number()) throw ConfigError("stability.thetas[" + std::to_string(i) + "]", "expected a number");
      cfg.thetas.push_back(thetas[i].get<double>());
    }
  }
  const char* edges[] = {"re_min", "re_max", "im_min", "im_max"};
  int given = 0;
  for (const char* e : edges) given += d["stability"][e].is_null() ? 0 : 1;
  if (given == 4) {
    Rect r{number(d, "stability.re_min"), number(d, "stability.re_max"), number(d, "stability.im_min"),
           number(d, "stability.im_max")};
    if (!(r.re_min <= r.re_max) || !(r.im_min <= r.im_max)) throw ConfigError("stability", "empty rectangle");
    cfg.rect = r;
  } else if (given != 0) {
    throw ConfigError("stability", "re_min, re_max, im_min, im_max must be given together");
  }
  const auto n_re = integer(d, "stability.n_re"), n_im = integer(d, "stability.n_im");
  if (n_re < 2) throw ConfigError("stability.n_re", "must be >= 2");
  if (n_im < 2) throw ConfigError("stability.n_im", "must be >= 2");
  cfg.n_re = static_cast<std::size_t>(n_re);
  cfg.n_im = static_cast<std::size_t>(n_im);
  cfg.search_limit = number(d, "stability.search_limit");
  if (!(cfg.search_limit < 0.0)) throw ConfigError("stability.search_limit", "must be negative");

  cfg.h_ref = optional_number(d, "converge.h_ref");
  if (cfg.h_ref && !(*cfg.h_ref > 0.0)) throw ConfigError("converge.h_ref", "must be positive");
  const json& ms = d["converge"]["m_list"];
  if (!ms.is_array() || ms.empty()) throw ConfigError("converge.m_list", "expected a non-empty list");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!ms[i].is_number_integer() || ms[i].get<int>() < 0) {
      throw ConfigError("converge.m_list[" + std::to_string(i) + "]", "expected a non-negative integer");
    }
    cfg.m_list.push_back(ms[i].get<int>());
  }
  if (!d["converge"]["component"].is_null()) {
    const auto c = integer(d, "converge.component");
    if (c < 0) throw ConfigError("converge.component", "must be >= 0");
    cfg.component = static_cast<std::size_t>(c);
  }
  cfg.prefer_exact = boolean(d, "converge.prefer_exact");

  cfg.h_hi = positive(d, "critical.h_hi");
  cfg.tol = positive(d, "critical.tol");
  cfg.scan_from = optional_number(d, "critical.scan_from");
  if (cfg.scan_from && !(*cfg.scan_from > 0.0)) throw ConfigError("critical.scan_from", "must be positive");
  cfg.growth = number(d, "critical.growth");
  if (!(cfg.growth > 1.0)) throw ConfigError("critical.growth", "must be > 1");
  cfg.cap = optional_number(d, "critical.cap");
  if (cfg.cap && !(*cfg.cap > 0.0)) throw ConfigError("critical.cap", "must be positive");

  const auto workers = integer(d, "workers");
  if (workers < 0) throw ConfigError("workers", "must be >= 0");
  cfg.workers = static_cast<unsigned>(workers);
  const auto seed = integer(d, "seed");
  if (seed < 0) throw ConfigError("seed", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);

  // The worker count does not change results, so it stays out of the digest.
  json digest_doc = document;
  digest_doc.erase("workers");
  cfg.digest = sha256_hex(digest_doc.dump());
  cfg.document = std::move(document);
  return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides) {
  json doc = default_document();
  std::filesystem::path base_dir = std::filesystem::current_path();
  if (file) {
    std::ifstream in(*file);
    if (!in) throw IoError("cannot read config file '" + file->string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json user = json::parse(buf.str(), nullptr, false);
    if (user.is_discarded()) throw ConfigError("", "config file '" + file->string() + "' is not valid JSON");
    merge_strict(doc, user);
    base_dir = file->parent_path().empty() ? base_dir : std::filesystem::absolute(file->parent_path());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return resolve(std::move(doc), base_dir);
}

SplitProblem make_problem(const ProblemConfig& c) {
  if (c.kind == "manufactured_smooth") {
    auto p = manufactured_smooth();
    if (c.horizon) p.horizon = *c.horizon;
    return p;
  }
  if (c.kind == "manufactured_membrane") {
    if (!(c.tau_min > 0.0)) throw ConfigError("problem.tau_min", "must be positive");
    auto p = manufactured_membrane(c.tau_min);
    if (c.horizon) p.horizon = *c.horizon;
    return p;
  }
  if (c.kind == "theta_split") {
    return theta_split(c.lambda, c.theta, c.horizon.value_or(10.0), c.y0);
  }
  if (c.kind == "beeler_reuter") {
    MembraneModel model = [&] {
      try {
        return MembraneModel::load(c.model_file);
      } catch (const LoadError& e) {
        throw ConfigError("problem.model_file", e.what());
      }
    }();
    Stimulation s = model.stimulation();
    if (c.stim_amplitude) s.amplitude = *c.stim_amplitude;
    if (c.stim_start) s.start = *c.stim_start;
    if (c.stim_duration) s.duration = *c.stim_duration;
    if (c.stim_period) s.period = *c.stim_period;
    if (s.duration < 0.0 || s.period < 0.0) throw ConfigError("problem.stimulation", "negative duration or period");
    model.set_stimulation(s);
    if (c.horizon) model.set_horizon(*c.horizon);
    return br_model(model);
  }
  throw ConfigError("problem.kind", "unknown problem '" + c.kind +
                                        "' (expected manufactured_smooth, manufactured_membrane, theta_split, "
                                        "beeler_reuter)");
}

}  // namespace rushlarsen::cli
