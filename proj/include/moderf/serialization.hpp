#pragma once

// JSON encodings of the library's result types.

#include <json.hpp>

#include "moderf/contraction.hpp"
#include "moderf/function_space.hpp"
#include "moderf/picard_solver.hpp"
#include "moderf/quadrature.hpp"
#include "moderf/shooting_oracle.hpp"

namespace moderf {

inline nlohmann::json to_json(const QuadratureResult& r) {
    return {{"value", r.value}, {"error_estimate", r.error_estimate},
            {"evaluations", r.evaluations}};
}

/// Nodes are emitted as [[x, value], ...], the JSON twin of the CSV rows.
inline nlohmann::json to_json(const GridFunction& h) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < h.size(); ++i) nodes.push_back({h.xs()[i], h.values()[i]});
    return {{"x_max", h.x_max()}, {"tail_value", h.tail_value()}, {"nodes", std::move(nodes)}};
}

inline GridFunction grid_function_from_json(const nlohmann::json& j) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& node : j.at("nodes")) {
        xs.push_back(node.at(0).get<double>());
        ys.push_back(node.at(1).get<double>());
    }
    if (xs.empty() || xs.back() != j.at("x_max").get<double>()) {
        throw InvalidArgument("JSON x_max does not match the last node");
    }
    return GridFunction(std::move(xs), std::move(ys), j.at("tail_value").get<double>());
}

inline nlohmann::json to_json(const KMembershipReport& r) {
    nlohmann::json violated = nlohmann::json::array();
    for (auto c : r.violated_conditions) violated.push_back(to_string(c));
    return {{"in_K", r.in_K}, {"max_violation", r.max_violation},
            {"violated_conditions", std::move(violated)}};
}

inline nlohmann::json to_json(const IterationReport& r) {
    return {{"iterations", r.iterations},
            {"residuals", r.residuals},
            {"empirical_ratios", r.empirical_ratios},
            {"contraction_modulus", r.contraction_modulus},
            {"a_posteriori_bound", r.a_posteriori_bound},
            {"converged", r.converged},
            {"solution", to_json(r.solution)}};
}

inline nlohmann::json to_json(const Delta1Bracket& b) { return {{"lo", b.lo}, {"hi", b.hi}}; }

inline nlohmann::json to_json(const ContractionCertificate& c) {
    return {{"delta", c.delta},
            {"g_value", c.g_value},
            {"delta1_bracket", to_json(c.delta1_bracket)},
            {"is_contractive", c.is_contractive}};
}

inline nlohmann::json to_json(const BoundCheck& b) {
    return {{"lhs", b.lhs}, {"rhs", b.rhs}, {"holds", b.holds}, {"slack", b.slack}};
}

inline nlohmann::json to_json(const ShootingResult& r) {
    return {{"slope0", r.slope0},
            {"far_field_residual", r.far_field_residual},
            {"bisection_steps", r.bisection_steps},
            {"trace", to_json(r.trace)}};
}

}  // namespace moderf
