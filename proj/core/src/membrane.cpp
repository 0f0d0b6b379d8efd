#include "rushlarsen/membrane.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rushlarsen/errors.hpp"
#include "rushlarsen/phi.hpp"

namespace rushlarsen {
namespace {

using json = nlohmann::json;

constexpr double kRequired = std::numeric_limits<double>::quiet_NaN();

struct KeyDef {
  const char* name;
  double fallback;
};

struct CurrentTemplateInfo {
  const char* id;
  CurrentTemplate kind;
  std::vector<KeyDef> keys;
  bool uses_gates;
  bool uses_concentration;
};

const std::vector<CurrentTemplateInfo>& current_templates() {
  static const std::vector<CurrentTemplateInfo> table = {
      {"gated_ohmic", CurrentTemplate::GatedOhmic, {{"g", kRequired}, {"g_leak", 0.0}, {"E", kRequired}}, true, false},
      {"nernst_gated",
       CurrentTemplate::NernstGated,
       {{"g", kRequired}, {"E0", kRequired}, {"E_log", kRequired}},
       true,
       true},
      {"inward_rectifier",
       CurrentTemplate::InwardRectifier,
       {{"g", kRequired},
        {"A", kRequired},
        {"B", kRequired},
        {"k1", kRequired},
        {"k2", kRequired},
        {"v1", kRequired},
        {"v2", kRequired},
        {"v3", kRequired}},
       false,
       false},
      {"time_dependent_outward",
       CurrentTemplate::TimeDependentOutward,
       {{"g", kRequired}, {"k", kRequired}, {"v1", kRequired}, {"v2", kRequired}},
       true,
       false},
  };
  return table;
}

const std::vector<KeyDef>& calcium_uptake_keys() {
  static const std::vector<KeyDef> keys = {{"k_in", kRequired}, {"k_rel", kRequired}, {"c_rest", kRequired}};
  return keys;
}

void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw LoadError(path + "." + it.key(), "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw LoadError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw LoadError(path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw LoadError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw LoadError(path, "non-finite value");
  return x;
}

std::string string_field(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) throw LoadError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> constants(const json& obj, const std::string& path, const std::vector<KeyDef>& keys) {
  if (!obj.is_object()) throw LoadError(path, "expected an object");
  std::set<std::string> known;
  std::vector<double> out;
  for (const auto& k : keys) {
    known.insert(k.name);
    auto it = obj.find(k.name);
    if (it == obj.end()) {
      if (std::isnan(k.fallback)) throw LoadError(path + "." + k.name, "missing");
      out.push_back(k.fallback);
    } else {
      out.push_back(number(*it, path + "." + k.name));
    }
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw LoadError(path + "." + it.key(), "unknown constant");
  }
  return out;
}

RateFunction rate_function(const json& obj, const std::string& path) {
  reject_unknown_keys(obj, path, {"c1", "c2", "c3", "c4", "c5", "c6", "c7"});
  RateFunction r;
  for (int i = 0; i < 7; ++i) {
    const std::string key = "c" + std::to_string(i + 1);
    r.c[i] = number(require(obj, path, key.c_str()), path + "." + key);
  }
  return r;
}

double gate_product(const CurrentSpec& c, std::span<const double> y) {
  double p = 1.0;
  for (const auto& [index, power] : c.gates) {
    const double w = y[index];
    for (int i = 0; i < power; ++i) p *= w;
  }
  return p;
}

}  // namespace

double RateFunction::operator()(double v) const {
  const double x = v + c[2];
  if (c[0] == 0.0 && c[6] == -1.0 && c[2] == c[4] && c[5] != 0.0) {
    // c4 x / (e^{c6 x} - 1) = c4 / (c6 phi_1(c6 x))
    return c[3] / (c[5] * phi(1, c[5] * x));
  }
  return (c[0] * std::exp(c[1] * x) + c[3] * (v + c[4])) / (std::exp(c[5] * x) + c[6]);
}

double Stimulation::operator()(double t) const {
  if (amplitude == 0.0 || duration <= 0.0 || t < start) return 0.0;
  double local = t - start;
  if (period > 0.0) local = std::fmod(local, period);
  return local < duration ? amplitude : 0.0;
}

MembraneModel MembraneModel::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw LoadError("document", e.what());
  }
  if (!doc.is_object()) throw LoadError("document", "expected an object");
  reject_unknown_keys(doc, "document",
                      {"name", "source", "notes", "p", "q", "gates", "currents", "concentration_dynamics",
                       "rest_state", "stimulation", "horizon"});

  MembraneModel m;
  m.name_ = string_field(doc, "document", "name");

  const json& p_node = require(doc, "document", "p");
  const json& q_node = require(doc, "document", "q");
  if (!p_node.is_number_integer() || p_node.get<long>() < 0) throw LoadError("p", "expected a non-negative integer");
  if (!q_node.is_number_integer() || q_node.get<long>() < 0 || q_node.get<long>() > 1) {
    throw LoadError("q", "expected 0 or 1");
  }
  const auto p = static_cast<std::size_t>(p_node.get<long>());
  const auto q = static_cast<std::size_t>(q_node.get<long>());

  const json& gates = require(doc, "document", "gates");
  if (!gates.is_array() || gates.size() != p) throw LoadError("gates", "expected an array of p entries");
  std::map<std::string, std::size_t> gate_index;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string path = "gates[" + std::to_string(i) + "]";
    const json& g = gates[i];
    if (!g.is_object()) throw LoadError(path, "expected an object");
    reject_unknown_keys(g, path, {"name", "alpha", "beta"});
    GateSpec spec;
    spec.name = string_field(g, path, "name");
    if (gate_index.count(spec.name)) throw LoadError(path + ".name", "duplicate gate '" + spec.name + "'");
    spec.alpha = rate_function(require(g, path, "alpha"), path + ".alpha");
    spec.beta = rate_function(require(g, path, "beta"), path + ".beta");
    gate_index[spec.name] = i;
    m.gates_.push_back(std::move(spec));
  }

  std::string concentration_name;
  const json* conc_node = nullptr;
  if (q == 1) {
    conc_node = &require(doc, "document", "concentration_dynamics");
    concentration_name = string_field(*conc_node, "concentration_dynamics", "name");
  } else if (doc.contains("concentration_dynamics")) {
    throw LoadError("concentration_dynamics", "present but q = 0");
  }

  const json& currents = require(doc, "document", "currents");
  if (!currents.is_array() || currents.empty()) throw LoadError("currents", "expected a non-empty array");
  std::map<std::string, std::size_t> current_index;
  for (std::size_t i = 0; i < currents.size(); ++i) {
    const std::string path = "currents[" + std::to_string(i) + "]";
    const json& c = currents[i];
    if (!c.is_object()) throw LoadError(path, "expected an object");
    reject_unknown_keys(c, path, {"name", "template", "gates", "concentration", "constants"});
    CurrentSpec spec;
    spec.name = string_field(c, path, "name");
    const std::string id = string_field(c, path, "template");
    const CurrentTemplateInfo* info = nullptr;
    for (const auto& t : current_templates()) {
      if (id == t.id) info = &t;
    }
    if (!info) throw LoadError(path + ".template", "unknown template id '" + id + "'");
    spec.kind = info->kind;
    spec.constants = constants(require(c, path, "constants"), path + ".constants", info->keys);

    if (c.contains("gates")) {
      if (!info->uses_gates) throw LoadError(path + ".gates", "template '" + id + "' takes no gates");
      const json& gp = c["gates"];
      if (!gp.is_object()) throw LoadError(path + ".gates", "expected an object of exponents");
      for (auto it = gp.begin(); it != gp.end(); ++it) {
        auto gi = gate_index.find(it.key());
        if (gi == gate_index.end()) throw LoadError(path + ".gates." + it.key(), "unknown gate");
        if (!it->is_number_integer() || it->get<int>() < 1) {
          throw LoadError(path + ".gates." + it.key(), "exponent must be a positive integer");
        }
        spec.gates.emplace_back(gi->second, it->get<int>());
      }
    }
    if (info->uses_concentration) {
      const std::string cname = string_field(c, path, "concentration");
      if (q == 0 || cname != concentration_name) throw LoadError(path + ".concentration", "unknown concentration");
      spec.concentration = p;
    } else if (c.contains("concentration")) {
      throw LoadError(path + ".concentration", "template '" + id + "' takes no concentration");
    }
    if (current_index.count(spec.name)) throw LoadError(path + ".name", "duplicate current");
    current_index[spec.name] = i;
    m.currents_.push_back(std::move(spec));
  }

  if (conc_node) {
    const std::string path = "concentration_dynamics";
    reject_unknown_keys(*conc_node, path, {"name", "template", "current", "constants"});
    ConcentrationSpec spec;
    spec.name = concentration_name;
    const std::string id = string_field(*conc_node, path, "template");
    if (id != "calcium_uptake") throw LoadError(path + ".template", "unknown template id '" + id + "'");
    const std::string src = string_field(*conc_node, path, "current");
    auto ci = current_index.find(src);
    if (ci == current_index.end()) throw LoadError(path + ".current", "unknown current '" + src + "'");
    spec.source_current = ci->second;
    spec.constants = constants(require(*conc_node, path, "constants"), path + ".constants", calcium_uptake_keys());
    m.concentrations_.push_back(std::move(spec));
  }

  const json& rest = require(doc, "document", "rest_state");
  if (!rest.is_array() || rest.size() != p + q + 1) {
    throw LoadError("rest_state", "expected " + std::to_string(p + q + 1) + " numbers");
  }
  for (std::size_t i = 0; i < rest.size(); ++i) {
    m.rest_state_.push_back(number(rest[i], "rest_state[" + std::to_string(i) + "]"));
  }

  const json& stim = require(doc, "document", "stimulation");
  if (!stim.is_object()) throw LoadError("stimulation", "expected an object");
  reject_unknown_keys(stim, "stimulation", {"amplitude", "start", "duration", "period"});
  m.stimulation_.amplitude = number(require(stim, "stimulation", "amplitude"), "stimulation.amplitude");
  m.stimulation_.start = number(require(stim, "stimulation", "start"), "stimulation.start");
  m.stimulation_.duration = number(require(stim, "stimulation", "duration"), "stimulation.duration");
  m.stimulation_.period = number(require(stim, "stimulation", "period"), "stimulation.period");
  if (m.stimulation_.duration < 0.0 || m.stimulation_.period < 0.0) {
    throw LoadError("stimulation", "duration and period must be non-negative");
  }

  if (doc.contains("horizon")) {
    m.horizon_ = number(doc["horizon"], "horizon");
    if (!(m.horizon_ > 0.0)) throw LoadError("horizon", "must be positive");
  }
  return m;
}

MembraneModel MembraneModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

double MembraneModel::current(std::size_t index, std::span<const double> y) const {
  const CurrentSpec& c = currents_.at(index);
  const double v = y[potential_index()];
  const auto& k = c.constants;
  switch (c.kind) {
    case CurrentTemplate::GatedOhmic:
      return (k[0] * gate_product(c, y) + k[1]) * (v - k[2]);
    case CurrentTemplate::NernstGated: {
      const double reversal = k[1] + k[2] * std::log(y[c.concentration]);
      return k[0] * gate_product(c, y) * (v - reversal);
    }
    case CurrentTemplate::InwardRectifier: {
      const double g = k[0], A = k[1], B = k[2], k1 = k[3], k2 = k[4], v1 = k[5], v2 = k[6], v3 = k[7];
      const double rectifying =
          A * (std::exp(k1 * (v + v1)) - 1.0) / (std::exp(k2 * (v + v2)) + std::exp(k1 * (v + v2)));
      // (v+v3) / (1 - e^{-k1 (v+v3)}) = 1 / (k1 phi_1(-k1 (v+v3)))
      const double linear = B / (k1 * phi(1, -k1 * (v + v3)));
      return g * (rectifying + linear);
    }
    case CurrentTemplate::TimeDependentOutward:
      return gate_product(c, y) * k[0] * (std::exp(k[1] * (v + k[2])) - 1.0) / std::exp(k[1] * (v + k[3]));
  }
  return 0.0;
}

double MembraneModel::ionic_current(std::span<const double> y) const {
  double total = 0.0;
  for (std::size_t i = 0; i < currents_.size(); ++i) total += current(i, y);
  return total;
}

void MembraneModel::split(double t, std::span<const double> y, std::span<double> a, std::span<double> b) const {
  const double v = y[potential_index()];
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const double alpha = gates_[i].alpha(v);
    const double beta = gates_[i].beta(v);
    a[i] = -(alpha + beta);
    b[i] = alpha;
  }
  for (std::size_t i = 0; i < concentrations_.size(); ++i) {
    const ConcentrationSpec& c = concentrations_[i];
    const std::size_t idx = gates_.size() + i;
    const auto& k = c.constants;
    a[idx] = 0.0;
    b[idx] = -k[0] * current(c.source_current, y) + k[1] * (k[2] - y[idx]);
  }
  a[potential_index()] = 0.0;
  b[potential_index()] = -ionic_current(y) + stimulation_(t);
}

void MembraneModel::rhs_gate_form(double t, std::span<const double> y, std::span<double> dydt) const {
  const double v = y[potential_index()];
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const double alpha = gates_[i].alpha(v);
    const double beta = gates_[i].beta(v);
    const double tau = 1.0 / (alpha + beta);
    const double w_inf = alpha * tau;
    dydt[i] = (w_inf - y[i]) / tau;
  }
  for (std::size_t i = 0; i < concentrations_.size(); ++i) {
    const ConcentrationSpec& c = concentrations_[i];
    const std::size_t idx = gates_.size() + i;
    const auto& k = c.constants;
    dydt[idx] = -k[0] * current(c.source_current, y) + k[1] * (k[2] - y[idx]);
  }
  dydt[potential_index()] = -ionic_current(y) + stimulation_(t);
}

std::vector<std::string> MembraneModel::labels() const {
  std::vector<std::string> out;
  for (const auto& g : gates_) out.push_back(g.name);
  for (const auto& c : concentrations_) out.push_back(c.name);
  out.push_back("v");
  return out;
}

std::vector<std::string> MembraneModel::units() const {
  std::vector<std::string> out(gates_.size(), "1");
  for (std::size_t i = 0; i < concentrations_.size(); ++i) out.push_back("mol/L");
  out.push_back("mV");
  return out;
}

SplitProblem br_model(const MembraneModel& model) {
  SplitProblem p;
  p.name = model.name();
  p.y0 = model.rest_state();
  p.horizon = model.horizon();
  p.labels = model.labels();
  p.units = model.units();
  auto shared = std::make_shared<const MembraneModel>(model);
  auto warned = std::make_shared<std::atomic<bool>>(false);
  p.split = [shared, warned](double t, std::span<const double> y, std::span<double> a, std::span<double> b) {
    const std::size_t first = shared->gate_count();
    for (std::size_t i = first; i < first + shared->concentration_count(); ++i) {
      if (y[i] < 0.0 && !warned->exchange(true)) {
        std::clog << "warning: " << shared->name() << ": concentration '" << shared->labels()[i]
                  << "' went negative at t = " << t << "\n";
      }
    }
    shared->split(t, y, a, b);
  };
  return p;
}

}  // namespace rushlarsen
