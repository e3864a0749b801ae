#pragma once

#include <string>

#include <json.hpp>

#include "esstime/disturbance.hpp"
#include "esstime/strategy.hpp"

namespace esstime {

/// {"kind":"uniform","t_low":..,"t_high":..} or
/// {"kind":"piecewise","knots":[[x,density],...]}
Disturbance disturbance_from_json(const nlohmann::json& j);
nlohmann::json disturbance_to_json(const Disturbance& d);

/// {"atom_at_zero":..,"ac_knots":[[x,F_nu],...]}
MixedStrategy strategy_from_json(const nlohmann::json& j);
nlohmann::json strategy_to_json(const MixedStrategy& s);

/// `uniform:LOW,HIGH` or `piecewise:@file.json`.
Disturbance parse_disturbance_spec(const std::string& spec);

/// '.' decimal separator, 12 significant digits.
std::string csv_num(double v);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace esstime
