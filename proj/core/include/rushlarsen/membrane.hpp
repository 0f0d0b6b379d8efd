#pragma once

// Hodgkin-Huxley type membrane models described by a parameter document.
//
// State layout is (w_1..w_p, c_1..c_q, v). Each gate relaxes as
//   w' = alpha(v) (1 - w) - beta(v) w = (w_inf - w) / tau,
// giving the diagonal split a = -(alpha + beta), b = alpha. Concentrations and the
// potential carry a = 0:  c' = g(y),  v' = -sum(currents) + I_st(t).

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rushlarsen/problem.hpp"

namespace rushlarsen {

/// Exponential-rational rate template
///   (c1 e^{c2 (v + c3)} + c4 (v + c5)) / (e^{c6 (v + c3)} + c7),
/// with the removable 0/0 of the c1 = 0, c7 = -1, c3 = c5 form evaluated through phi_1.
struct RateFunction {
  std::array<double, 7> c{};
  double operator()(double v) const;
};

struct GateSpec {
  std::string name;
  RateFunction alpha;
  RateFunction beta;
};

enum class CurrentTemplate {
  /// (g prod(w^p) + g_leak) (v - E)
  GatedOhmic,
  /// g prod(w^p) (v - (E0 + E_log ln c))
  NernstGated,
  /// g (A (e^{k1 (v+v1)} - 1) / (e^{k2 (v+v2)} + e^{k1 (v+v2)}) + B (v+v3) / (1 - e^{-k1 (v+v3)}))
  InwardRectifier,
  /// prod(w^p) g (e^{k (v+v1)} - 1) / e^{k (v+v2)}
  TimeDependentOutward,
};

struct CurrentSpec {
  std::string name;
  CurrentTemplate kind = CurrentTemplate::GatedOhmic;
  std::vector<std::pair<std::size_t, int>> gates;  // (gate index, exponent)
  std::size_t concentration = 0;                   // NernstGated only
  std::vector<double> constants;                   // in template key order
};

enum class ConcentrationTemplate {
  /// c' = -k_in I_src + k_rel (c_rest - c)
  CalciumUptake,
};

struct ConcentrationSpec {
  std::string name;
  ConcentrationTemplate kind = ConcentrationTemplate::CalciumUptake;
  std::size_t source_current = 0;
  std::vector<double> constants;
};

/// Square pulse of `amplitude` on [start, start + duration), repeated every `period` if > 0.
struct Stimulation {
  double amplitude = 0.0;
  double start = 0.0;
  double duration = 0.0;
  double period = 0.0;

  double operator()(double t) const;
};

class MembraneModel {
 public:
  /// Parses and validates a model document. Throws LoadError naming the bad field.
  static MembraneModel parse(std::string_view json_text);
  /// Throws IoError if the file cannot be read, LoadError on schema violations.
  static MembraneModel load(const std::filesystem::path& path);

  const std::string& name() const noexcept { return name_; }
  std::size_t gate_count() const noexcept { return gates_.size(); }
  std::size_t concentration_count() const noexcept { return concentrations_.size(); }
  std::size_t dimension() const noexcept { return gates_.size() + concentrations_.size() + 1; }
  std::size_t potential_index() const noexcept { return dimension() - 1; }

  const std::vector<GateSpec>& gates() const noexcept { return gates_; }
  const std::vector<CurrentSpec>& currents() const noexcept { return currents_; }
  const std::vector<double>& rest_state() const noexcept { return rest_state_; }
  const Stimulation& stimulation() const noexcept { return stimulation_; }
  double horizon() const noexcept { return horizon_; }

  void set_stimulation(const Stimulation& s) { stimulation_ = s; }
  void set_horizon(double horizon) { horizon_ = horizon; }

  /// Value of one current at state y.
  double current(std::size_t index, std::span<const double> y) const;
  /// Sum of all currents (the ionic current I_ion).
  double ionic_current(std::span<const double> y) const;

  void split(double t, std::span<const double> y, std::span<double> a, std::span<double> b) const;

  /// Direct right-hand side in gate form (w_inf - w) / tau, independent of `split`.
  void rhs_gate_form(double t, std::span<const double> y, std::span<double> dydt) const;

  std::vector<std::string> labels() const;
  std::vector<std::string> units() const;

 private:
  std::string name_;
  std::vector<GateSpec> gates_;
  std::vector<CurrentSpec> currents_;
  std::vector<ConcentrationSpec> concentrations_;
  std::vector<double> rest_state_;
  Stimulation stimulation_;
  double horizon_ = 400.0;
};

/// Split problem for a membrane model, starting from its rest state.
/// Logs one warning per problem instance if a concentration goes negative.
SplitProblem br_model(const MembraneModel& model);

}  // namespace rushlarsen
