#pragma once

// JSON and CSV forms of the result records. Doubles round-trip exactly; NaN
// and infinities are written as the strings "nan", "inf", "-inf".

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ymflow/evolve.hpp"
#include "ymflow/exact_pf.hpp"
#include "ymflow/ggmt.hpp"
#include "ymflow/model.hpp"
#include "ymflow/physical.hpp"
#include "ymflow/quadrature.hpp"
#include "ymflow/spectral.hpp"

namespace ymflow::report {

using json = nlohmann::json;

json number(double value);
double to_double(const json& value);
/// "%.17g".
std::string format_double(double value);

json to_json(const Dimension& dim);
json to_json(const quad::ExactForm& form);
quad::ExactForm exact_form_from_json(const json& j);
json to_json(const quad::IntegralResult& result);
quad::IntegralResult integral_from_json(const json& j);
json to_json(const ggmt::GgmtReport& report);
ggmt::GgmtReport ggmt_from_json(const json& j);
json to_json(const spectral::EigenResult& result);
spectral::EigenResult eigen_from_json(const json& j);
json to_json(const evolve::SolverConfig& cfg);
/// Run metadata; the trace itself goes to CSV.
json to_json(const evolve::ShootResult& result);
json to_json(const evolve::PhysicalResult& result);

/// Exact partial-fraction certificate: field, coefficients, interval, value.
json certificate(const quad::RationalEvenFunction& ref, const quad::Rational& lo,
                 const quad::Rational& hi, const quad::IntegralResult& result);

/// Header tau,sup,sigma,xproxy,c1 and one row per sample.
std::string trace_csv(const evolve::EvolutionTrace& trace);
evolve::EvolutionTrace trace_from_csv(const std::string& text);

std::string json_lines(const std::vector<json>& records);
std::vector<json> parse_json_lines(const std::string& text);

/// Throws std::runtime_error naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace ymflow::report
