#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evsim/params.hpp"
#include "evsim/rational.hpp"

namespace evsim {

/// Integer exponents over the (mass, length, time) basis.
struct Dimensions {
  int mass = 0;
  int length = 0;
  int time = 0;

  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

struct Quantity {
  std::string name;
  std::optional<double> value;
  Dimensions dims;
};

/// Rows are base dimensions (M, L, T), columns are quantities.
using DimensionMatrix = std::vector<std::vector<Rational>>;

/// Column j holds the exponents of quantity j. Throws ValidationError on an
/// empty set or duplicate names.
DimensionMatrix dimension_matrix(std::span<const Quantity> quantities);

int matrix_rank(const DimensionMatrix& matrix);

/// A monomial prod_j q_j^e_j over the quantity list it was built from.
struct PiGroup {
  std::string name;
  std::vector<Rational> exponents;
};

struct PiGroupSet {
  std::vector<std::string> quantities;
  std::vector<PiGroup> groups;

  /// Human-readable monomial, e.g. "vx * m^(1/2) * CF^(-1/2) * l^(-1/2)".
  [[nodiscard]] std::string expression(const PiGroup& group) const;
};

/// True when the exponents cancel every base dimension exactly.
bool is_dimensionless(const PiGroup& group, std::span<const Quantity> quantities);

/// Nullspace basis of the dimension matrix in exact arithmetic.
///
/// Pivots are chosen greedily, trying the `repeating` quantities first and
/// then the rest in input order. Each remaining quantity yields one group in
/// which it appears with exponent 1, so the basis is canonical for a given
/// ordering. Groups are named pi1, pi2, ... in input order of their leading
/// quantity.
PiGroupSet compute_pi_groups(std::span<const Quantity> quantities,
                             std::span<const std::string> repeating = {});

/// prod_j value_j^e_j. Every quantity with a nonzero exponent needs a value.
double evaluate_group(const PiGroup& group, std::span<const Quantity> quantities);

/// Quantity file: one "name value M L T" line per quantity; value may be
/// "-" when unknown. Blank lines and '#' comments are skipped.
std::vector<Quantity> parse_quantities(std::string_view text);

// ---------------------------------------------------------------------------
// The bicycle + drivetrain model's own quantity set.

inline constexpr std::size_t kVehicleGroupCount = 13;

/// The 16 quantities of the vehicle energy model: seven variables
/// (vx, vy, r, t, a, delta, Eb), valued 1, and nine constants taken from
/// `params` plus the powertrain efficiency `eta`. Ordered so that
/// compute_pi_groups with vehicle_repeating_quantities() yields groups
/// pi1..pi13 in their conventional order.
std::vector<Quantity> vehicle_quantities(const VehicleParams& params, double eta);

/// m, CF, l.
std::vector<std::string> vehicle_repeating_quantities();

using VehiclePiValues = std::array<double, kVehicleGroupCount>;

/// Values of pi1..pi13 (index 0 is pi1). Variable groups are evaluated at
/// unit variable value, so they expose the scaling coefficient, e.g.
/// sqrt(m / (CF l)) for pi9.
VehiclePiValues evaluate_vehicle_pi_groups(const VehicleParams& params, double eta);

/// pi groups that depend only on constants: 3, 5, 6, 7, 12, 13.
inline constexpr std::array<int, 6> kConstantGroups = {3, 5, 6, 7, 12, 13};

struct GroupMatch {
  std::string name;
  std::string expression;
  double value_a = 0.0;
  double value_b = 0.0;
  double ratio = 0.0;  // a / b
  bool pass = false;
  std::string note;
};

/// Compares the constant groups of two vehicles; a group passes when its
/// ratio is within `tolerance` of 1.
std::vector<GroupMatch> match_report(const VehicleParams& a, double eta_a, const VehicleParams& b,
                                     double eta_b, double tolerance = 0.10);

std::string match_report_csv(const std::vector<GroupMatch>& rows);

/// Ratios (system A / system B) that carry a B-scale run onto A while
/// keeping the variable pi groups equal.
struct ScaleFactors {
  double velocity = 1.0;
  double time = 1.0;
  double distance = 1.0;
  double energy = 1.0;
  double acceleration = 1.0;
  double yaw_rate = 1.0;

  static ScaleFactors identity() { return {}; }
  /// Factors for the opposite direction (B / A).
  [[nodiscard]] ScaleFactors inverse() const;
  [[nodiscard]] std::string to_json() const;
};

/// Velocity from pi9, time from pi8, energy from pi4; distance,
/// acceleration and yaw rate follow kinematically.
ScaleFactors scale_factors(const VehicleParams& a, const VehicleParams& b);

/// Wh/m on system A predicted from Wh/m measured on system B.
double scaled_efficiency(double wh_per_m_b, const ScaleFactors& factors);

/// Mass, length and time ratios (A / B) implied by a pair of vehicles, for
/// building exactly similar vehicles with similar_vehicle().
struct BaseRatios {
  double mass = 1.0;
  double length = 1.0;
  double time = 1.0;
};

BaseRatios base_ratios(const VehicleParams& a, const VehicleParams& b);

}  // namespace evsim
