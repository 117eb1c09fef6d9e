#include "evsim/similitude.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "evsim/detail/text.hpp"
#include "evsim/error.hpp"

namespace evsim {

namespace {

constexpr std::size_t kBaseDims = 3;

struct Echelon {
  DimensionMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column for each nonzero row
};

Echelon reduced_row_echelon(DimensionMatrix m) {
  Echelon e;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    const Rational lead = m[r][c];
    for (auto& v : m[r]) v /= lead;
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == r || m[k][c].is_zero()) continue;
      const Rational f = m[k][c];
      for (std::size_t j = 0; j < cols; ++j) m[k][j] -= f * m[r][j];
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.reduced = std::move(m);
  return e;
}

std::string exponent_suffix(const Rational& e) {
  if (e == Rational(1)) return "";
  if (e.is_integer()) return "^" + e.to_string();
  return "^(" + e.to_string() + ")";
}

}  // namespace

DimensionMatrix dimension_matrix(std::span<const Quantity> quantities) {
  if (quantities.empty()) throw ValidationError("dimension matrix needs at least one quantity");
  std::set<std::string> seen;
  for (const auto& q : quantities) {
    if (!seen.insert(q.name).second) throw ValidationError("duplicate quantity name: " + q.name);
  }
  DimensionMatrix m(kBaseDims, std::vector<Rational>(quantities.size()));
  for (std::size_t j = 0; j < quantities.size(); ++j) {
    m[0][j] = quantities[j].dims.mass;
    m[1][j] = quantities[j].dims.length;
    m[2][j] = quantities[j].dims.time;
  }
  return m;
}

int matrix_rank(const DimensionMatrix& matrix) {
  return static_cast<int>(reduced_row_echelon(matrix).pivots.size());
}

std::string PiGroupSet::expression(const PiGroup& group) const {
  std::string out;
  for (std::size_t j = 0; j < group.exponents.size(); ++j) {
    if (group.exponents[j].is_zero()) continue;
    if (!out.empty()) out += " * ";
    out += quantities[j] + exponent_suffix(group.exponents[j]);
  }
  return out.empty() ? "1" : out;
}

bool is_dimensionless(const PiGroup& group, std::span<const Quantity> quantities) {
  if (group.exponents.size() != quantities.size()) return false;
  Rational mass, length, time;
  for (std::size_t j = 0; j < quantities.size(); ++j) {
    mass += group.exponents[j] * quantities[j].dims.mass;
    length += group.exponents[j] * quantities[j].dims.length;
    time += group.exponents[j] * quantities[j].dims.time;
  }
  return mass.is_zero() && length.is_zero() && time.is_zero();
}

PiGroupSet compute_pi_groups(std::span<const Quantity> quantities,
                             std::span<const std::string> repeating) {
  const DimensionMatrix original = dimension_matrix(quantities);
  const std::size_t n = quantities.size();

  // Column order: preferred repeating quantities first, then input order.
  std::vector<std::size_t> order;
  for (const auto& name : repeating) {
    const auto it = std::find_if(quantities.begin(), quantities.end(),
                                 [&](const Quantity& q) { return q.name == name; });
    if (it == quantities.end()) throw ValidationError("unknown repeating quantity: " + name);
    const auto idx = static_cast<std::size_t>(std::distance(quantities.begin(), it));
    if (std::find(order.begin(), order.end(), idx) == order.end()) order.push_back(idx);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::find(order.begin(), order.end(), j) == order.end()) order.push_back(j);
  }

  DimensionMatrix permuted(kBaseDims, std::vector<Rational>(n));
  for (std::size_t r = 0; r < kBaseDims; ++r) {
    for (std::size_t c = 0; c < n; ++c) permuted[r][c] = original[r][order[c]];
  }
  const Echelon e = reduced_row_echelon(std::move(permuted));

  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;

  // Free columns, listed by original quantity index.
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  std::sort(free_cols.begin(), free_cols.end(),
            [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });

  PiGroupSet set;
  for (const auto& q : quantities) set.quantities.push_back(q.name);
  for (std::size_t f : free_cols) {
    PiGroup g;
    g.name = "pi" + std::to_string(set.groups.size() + 1);
    g.exponents.assign(n, Rational(0));
    g.exponents[order[f]] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      g.exponents[order[e.pivots[r]]] = -e.reduced[r][f];
    }
    if (!is_dimensionless(g, quantities)) {
      throw NumericError("internal error: group " + g.name + " is not dimensionless");
    }
    set.groups.push_back(std::move(g));
  }
  return set;
}

double evaluate_group(const PiGroup& group, std::span<const Quantity> quantities) {
  if (group.exponents.size() != quantities.size()) {
    throw ValidationError("group " + group.name + " does not match the quantity list");
  }
  double value = 1.0;
  for (std::size_t j = 0; j < quantities.size(); ++j) {
    const Rational& e = group.exponents[j];
    if (e.is_zero()) continue;
    if (!quantities[j].value) {
      throw ValidationError("quantity " + quantities[j].name + " has no value");
    }
    const double v = *quantities[j].value;
    value *= e.is_integer() ? std::pow(v, static_cast<double>(e.num())) : std::pow(v, e.to_double());
  }
  return value;
}

std::vector<Quantity> parse_quantities(std::string_view text) {
  std::vector<Quantity> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = lines[n];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    for (auto tok : detail::split(line, ' ')) {
      tok = detail::trim(tok);
      if (!tok.empty()) fields.push_back(tok);
    }
    const std::string where = "quantity file line " + std::to_string(n + 1);
    if (fields.size() != 5) throw ValidationError(where + ": expected 'name value M L T'");

    Quantity q;
    q.name = std::string(fields[0]);
    if (fields[1] != "-") {
      q.value = detail::parse_double(fields[1]);
      if (!q.value) throw ValidationError(where + ": bad value '" + std::string(fields[1]) + "'");
    }
    int dims[3];
    for (int k = 0; k < 3; ++k) {
      const auto v = detail::parse_long(fields[2 + k]);
      if (!v) throw ValidationError(where + ": bad exponent '" + std::string(fields[2 + k]) + "'");
      dims[k] = static_cast<int>(*v);
    }
    q.dims = {dims[0], dims[1], dims[2]};
    out.push_back(std::move(q));
  }
  if (out.empty()) throw ValidationError("quantity file defines no quantities");
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Quantity> vehicle_quantities(const VehicleParams& p, double eta) {
  // Leading quantities first (one group each), repeating set last.
  return {
      {"delta", 1.0, {0, 0, 0}},
      {"a", 1.0, {0, 1, -2}},
      {"lF", p.cg_to_front, {0, 1, 0}},
      {"Eb", 1.0, {1, 2, -2}},
      {"eta", eta, {0, 0, 0}},
      {"Iz", p.yaw_inertia, {1, 2, 0}},
      {"CR", p.cornering_stiffness_rear, {1, 1, -2}},
      {"t", 1.0, {0, 0, 1}},
      {"vx", 1.0, {0, 1, -1}},
      {"vy", 1.0, {0, 1, -1}},
      {"r", 1.0, {0, 0, -1}},
      {"J", p.shaft_inertia, {1, 2, 0}},
      {"B", p.shaft_damping, {1, 2, -1}},
      {"m", p.mass, {1, 0, 0}},
      {"CF", p.cornering_stiffness_front, {1, 1, -2}},
      {"l", p.wheelbase, {0, 1, 0}},
  };
}

std::vector<std::string> vehicle_repeating_quantities() { return {"m", "CF", "l"}; }

VehiclePiValues evaluate_vehicle_pi_groups(const VehicleParams& params, double eta) {
  if (!(params.mass > 0.0)) throw ValidationError("pi groups need m > 0");
  if (!(params.cornering_stiffness_front > 0.0)) throw ValidationError("pi groups need CF > 0");
  if (!(params.wheelbase > 0.0)) throw ValidationError("pi groups need l > 0");

  const auto quantities = vehicle_quantities(params, eta);
  const auto repeating = vehicle_repeating_quantities();
  const PiGroupSet set = compute_pi_groups(quantities, repeating);
  if (set.groups.size() != kVehicleGroupCount) {
    throw NumericError("vehicle quantity set produced " + std::to_string(set.groups.size()) +
                       " groups");
  }
  VehiclePiValues values{};
  for (std::size_t i = 0; i < kVehicleGroupCount; ++i) {
    values[i] = evaluate_group(set.groups[i], quantities);
  }
  return values;
}

std::vector<GroupMatch> match_report(const VehicleParams& a, double eta_a, const VehicleParams& b,
                                     double eta_b, double tolerance) {
  const auto va = evaluate_vehicle_pi_groups(a, eta_a);
  const auto vb = evaluate_vehicle_pi_groups(b, eta_b);
  const auto quantities = vehicle_quantities(a, eta_a);
  const auto set = compute_pi_groups(quantities, vehicle_repeating_quantities());

  std::vector<GroupMatch> rows;
  for (int k : kConstantGroups) {
    const auto i = static_cast<std::size_t>(k - 1);
    GroupMatch row;
    row.name = set.groups[i].name;
    row.expression = set.expression(set.groups[i]);
    row.value_a = va[i];
    row.value_b = vb[i];
    row.ratio = vb[i] != 0.0 ? va[i] / vb[i] : (va[i] == 0.0 ? 1.0 : INFINITY);
    row.pass = std::abs(row.ratio - 1.0) <= tolerance;
    if (k == 3) {
      // lF/l and lR/l are easily swapped in tabulated data.
      row.note = "complement lR/l = " + detail::format_sig(a.cg_to_rear / a.wheelbase) + " / " +
                 detail::format_sig(b.cg_to_rear / b.wheelbase);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string match_report_csv(const std::vector<GroupMatch>& rows) {
  std::string out = "group,expression,value_a,value_b,ratio,status,note\n";
  for (const auto& r : rows) {
    out += r.name + "," + r.expression + "," + detail::format_sig(r.value_a) + "," +
           detail::format_sig(r.value_b) + "," + detail::format_sig(r.ratio) + "," +
           (r.pass ? "pass" : "MISMATCH") + "," + r.note + "\n";
  }
  return out;
}

ScaleFactors ScaleFactors::inverse() const {
  return {1.0 / velocity,     1.0 / time,     1.0 / distance,
          1.0 / energy,       1.0 / acceleration, 1.0 / yaw_rate};
}

std::string ScaleFactors::to_json() const {
  using detail::format_sig;
  return "{\"velocity\": " + format_sig(velocity) + ", \"time\": " + format_sig(time) +
         ", \"distance\": " + format_sig(distance) + ", \"energy\": " + format_sig(energy) +
         ", \"acceleration\": " + format_sig(acceleration) +
         ", \"yaw_rate\": " + format_sig(yaw_rate) + "}";
}

ScaleFactors scale_factors(const VehicleParams& a, const VehicleParams& b) {
  // eta does not enter pi4, pi8 or pi9.
  const auto va = evaluate_vehicle_pi_groups(a, 1.0);
  const auto vb = evaluate_vehicle_pi_groups(b, 1.0);
  // Equal pi_k on both systems: x_A * c_A = x_B * c_B, so x_A / x_B = c_B / c_A.
  const auto ratio = [&](int k) { return vb[k - 1] / va[k - 1]; };

  ScaleFactors f;
  f.velocity = ratio(9);
  f.time = ratio(8);
  f.energy = ratio(4);
  f.distance = f.velocity * f.time;
  f.acceleration = f.velocity / f.time;
  f.yaw_rate = 1.0 / f.time;
  return f;
}

double scaled_efficiency(double wh_per_m_b, const ScaleFactors& factors) {
  return wh_per_m_b * factors.energy / factors.distance;
}

BaseRatios base_ratios(const VehicleParams& a, const VehicleParams& b) {
  return {a.mass / b.mass, a.wheelbase / b.wheelbase, scale_factors(a, b).time};
}

}  // namespace evsim
