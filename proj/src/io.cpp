#include "esstime/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace esstime {

using nlohmann::json;

Disturbance disturbance_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform")
        return Disturbance::uniform(j.at("t_low").get<double>(), j.at("t_high").get<double>());
    if (kind == "piecewise") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j.at("knots"))
            knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
        return Disturbance::piecewise_linear(std::move(knots));
    }
    throw std::invalid_argument("unknown disturbance kind: " + kind);
}

json disturbance_to_json(const Disturbance& d) {
    if (d.kind() == Disturbance::Kind::Uniform)
        return {{"kind", "uniform"}, {"t_low", d.t_low()}, {"t_high", d.t_high()}};
    json knots = json::array();
    for (std::size_t i = 0; i < d.knot_x().size(); ++i)
        knots.push_back({d.knot_x()[i], d.knot_density()[i]});
    return {{"kind", "piecewise"}, {"knots", std::move(knots)}};
}

MixedStrategy strategy_from_json(const json& j) {
    const double atom = j.at("atom_at_zero").get<double>();
    std::vector<std::pair<double, double>> knots;
    if (j.contains("ac_knots"))
        for (const auto& k : j.at("ac_knots"))
            knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
    return MixedStrategy(atom, std::move(knots));
}

json strategy_to_json(const MixedStrategy& s) {
    json knots = json::array();
    for (std::size_t i = 0; i < s.knot_x().size(); ++i)
        knots.push_back({s.knot_x()[i], s.knot_F()[i]});
    return {{"atom_at_zero", s.atom_at_zero()}, {"ac_knots", std::move(knots)}};
}

Disturbance parse_disturbance_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("disturbance spec must be uniform:LOW,HIGH or piecewise:@file.json");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "uniform") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("uniform disturbance needs LOW,HIGH");
        return Disturbance::uniform(std::stod(rest.substr(0, comma)),
                                    std::stod(rest.substr(comma + 1)));
    }
    if (kind == "piecewise") {
        if (rest.empty() || rest[0] != '@')
            throw std::invalid_argument("piecewise disturbance needs @file.json");
        return disturbance_from_json(load_json_file(rest.substr(1)));
    }
    throw std::invalid_argument("unknown disturbance kind: " + kind);
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace esstime
