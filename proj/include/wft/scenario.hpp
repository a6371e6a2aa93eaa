#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/coupling.hpp"
#include "wft/engine.hpp"
#include "wft/geometry.hpp"
#include "wft/model.hpp"
#include "wft/verify.hpp"

namespace wft {

inline constexpr int kSchemaVersion = 1;

/// A parsed, validated scenario file. Every field is resolved at load time
/// so that configuration errors surface before any computation.
struct Scenario {
  std::string name;
  nlohmann::json source;  ///< the document as read

  ModelPtr model;
  ConditionPtr condition;
  std::shared_ptr<const ZetaGeometry> geometry;
  bool unit_parameters = false;  ///< tangent geometries
  std::string coupling_type;     ///< "kink", "section" or "product"
  double drag = 0.0;             ///< kink alpha
  Matrix product_matrix;         ///< G(z) = B z for the product coupling

  nlohmann::json datum_spec;

  double h = 0.1;
  std::optional<double> epsilon;   ///< h^2 when absent
  std::vector<double> h_list;
  double horizon = 1.0;
  std::vector<double> snapshots;
  double window = 0.0;             ///< L1 window half-width; 1/h_max when zero
  int oracle_cells = 2000;
  EngineOptions engine;
  std::uint64_t seed = 0;

  double epsilon_for(double h_value) const;
  EngineOptions options_for(double h_value) const;
  /// The initial datum, which may depend on zeta^h (stationary data).
  InitialDatum datum(const PiecewiseConstantZeta& zeta_h) const;
  /// The datum as a function, for the finite-volume oracle.
  State datum_at(double x, const PiecewiseConstantZeta& zeta_h) const;
  /// Source of the smooth-geometry balance law for the oracle.
  SourceTerm oracle_source() const;
  State reference_state() const;
};

struct CouplingSpec {
  ConditionPtr condition;
  std::string type;
  double drag = 0.0;
  Matrix product_matrix;
  bool unit_parameters = false;
};

ModelPtr parse_model_spec(const nlohmann::json& spec);
/// Coupling for parameters of the given dimension.
CouplingSpec parse_coupling_spec(const nlohmann::json& spec, const ModelPtr& model,
                                 int parameter_dimension);

/// Parses and validates; throws ErrorKind::Config with a readable message.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Builds zeta^h, initializes and runs the engine to the horizon.
std::unique_ptr<Engine> run_scenario(const Scenario& sc, double h_value);

}  // namespace wft
