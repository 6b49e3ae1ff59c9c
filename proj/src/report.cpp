#include "ymflow/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ymflow::report {
namespace {

json record_json(const quad::QuadExtRecord& r) { return {{"x", r.x}, {"y", r.y}}; }

quad::QuadExtRecord record_from(const json& j) {
  return {j.at("x").get<std::string>(), j.at("y").get<std::string>()};
}

json number_list(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::vector<double> list_from(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(to_double(v));
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("parse_double: trailing characters in '" + text + "'");
  return v;
}

}  // namespace

json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double to_double(const json& value) {
  if (value.is_string()) return parse_double(value.get<std::string>());
  return value.get<double>();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json to_json(const Dimension& dim) {
  return {{"d", dim.d},
          {"n", dim.n},
          {"a", number(dim.a)},
          {"b", number(dim.b)},
          {"b_from_n", number(dim.b_from_n)},
          {"b_discrepancy", number(dim.b_discrepancy)},
          {"kappa0", dim.kappa0},
          {"kappa1", dim.kappa1},
          {"g_sigma_norm", number(dim.g_sigma_norm)},
          {"has_profile", dim.has_profile()}};
}

json to_json(const quad::ExactForm& form) {
  return {{"m", form.m},
          {"rational_part", record_json(form.rational_part)},
          {"log_coefficient", record_json(form.log_coefficient)},
          {"log_arg_num", record_json(form.log_arg_num)},
          {"log_arg_den", record_json(form.log_arg_den)},
          {"value_decimal", form.value_decimal}};
}

quad::ExactForm exact_form_from_json(const json& j) {
  quad::ExactForm form;
  form.m = j.at("m").get<long long>();
  form.rational_part = record_from(j.at("rational_part"));
  form.log_coefficient = record_from(j.at("log_coefficient"));
  form.log_arg_num = record_from(j.at("log_arg_num"));
  form.log_arg_den = record_from(j.at("log_arg_den"));
  form.value_decimal = j.at("value_decimal").get<std::string>();
  return form;
}

json to_json(const quad::IntegralResult& result) {
  json j = {{"value", number(result.value)},
            {"error_bound", number(result.error_bound)},
            {"method", result.method == quad::Method::adaptive ? "adaptive" : "exactPF"},
            {"converged", result.converged},
            {"subdivisions", result.subdivisions}};
  if (result.exact) j["exact"] = to_json(*result.exact);
  return j;
}

quad::IntegralResult integral_from_json(const json& j) {
  quad::IntegralResult r;
  r.value = to_double(j.at("value"));
  r.error_bound = to_double(j.at("error_bound"));
  const auto method = j.at("method").get<std::string>();
  if (method == "adaptive") {
    r.method = quad::Method::adaptive;
  } else if (method == "exactPF") {
    r.method = quad::Method::exactPF;
  } else {
    throw std::invalid_argument("integral_from_json: unknown method " + method);
  }
  r.converged = j.at("converged").get<bool>();
  r.subdivisions = j.at("subdivisions").get<int>();
  if (j.contains("exact")) r.exact = exact_form_from_json(j.at("exact"));
  return r;
}

json to_json(const ggmt::GgmtReport& report) {
  return {{"n", report.n},
          {"p", number(report.p)},
          {"alpha", number(report.alpha)},
          {"rho_star", number(report.rho_star)},
          {"upper_limit", number(report.upper_limit)},
          {"upper_limit_exact", report.upper_limit_exact},
          {"integral", to_json(report.integral)},
          {"constant", number(report.constant)},
          {"B", number(report.B)},
          {"passes", report.passes},
          {"pathway", std::string(ggmt::to_string(report.pathway))}};
}

ggmt::GgmtReport ggmt_from_json(const json& j) {
  ggmt::GgmtReport r;
  r.n = j.at("n").get<int>();
  r.p = to_double(j.at("p"));
  r.alpha = to_double(j.at("alpha"));
  r.rho_star = to_double(j.at("rho_star"));
  r.upper_limit = to_double(j.at("upper_limit"));
  r.upper_limit_exact = j.at("upper_limit_exact").get<std::string>();
  r.integral = integral_from_json(j.at("integral"));
  r.constant = to_double(j.at("constant"));
  r.B = to_double(j.at("B"));
  r.passes = j.at("passes").get<bool>();
  const auto pathway = ggmt::parse_pathway(j.at("pathway").get<std::string>());
  if (!pathway) throw std::invalid_argument("ggmt_from_json: unknown pathway");
  r.pathway = *pathway;
  return r;
}

json to_json(const spectral::EigenResult& result) {
  json j = {{"eigenvalues", number_list(result.eigenvalues)},
            {"residual_norms", number_list(result.residual_norms)},
            {"R", number(result.R)},
            {"N", result.N}};
  j["extrapolated"] = result.extrapolated ? number_list(*result.extrapolated) : json(nullptr);
  return j;
}

spectral::EigenResult eigen_from_json(const json& j) {
  spectral::EigenResult r;
  r.eigenvalues = list_from(j.at("eigenvalues"));
  r.residual_norms = list_from(j.at("residual_norms"));
  r.R = to_double(j.at("R"));
  r.N = j.at("N").get<std::size_t>();
  if (j.contains("extrapolated") && !j.at("extrapolated").is_null()) {
    r.extrapolated = list_from(j.at("extrapolated"));
  }
  return r;
}

json to_json(const evolve::SolverConfig& cfg) {
  return {{"d", cfg.dim.d},
          {"R", number(cfg.grid.R())},
          {"N", cfg.grid.size()},
          {"dt", number(cfg.dt)},
          {"theta", number(cfg.theta)},
          {"tau_max", number(cfg.tau_max)},
          {"bc", std::string(evolve::to_string(cfg.bc))},
          {"model", std::string(evolve::to_string(cfg.model))},
          {"sample_interval", number(cfg.sample_interval)},
          {"config_hash", cfg.hash()}};
}

json to_json(const evolve::ShootResult& result) {
  json history = json::array();
  for (const auto& [lo, hi] : result.bracket_history) history.push_back({number(lo), number(hi)});
  const auto& tr = result.final_trace;
  return {{"T", number(result.T)},
          {"verdict", std::string(evolve::to_string(result.verdict))},
          {"iterations", result.iterations},
          {"bracket_history", history},
          {"samples", tr.size()},
          {"blowup", tr.blowup},
          {"config_hash", tr.config_hash},
          {"c1_final", number(tr.c1.empty() ? std::nan("") : tr.c1.back())},
          {"sigma_final", number(tr.sigma.empty() ? std::nan("") : tr.sigma.back())}};
}

json to_json(const evolve::PhysicalResult& result) {
  return {{"blowup", result.blowup},
          {"global_looking", result.global_looking},
          {"stop_reason", result.stop_reason},
          {"steps", result.dt.size()},
          {"t_last", number(result.t_last)},
          {"sup_last", number(result.sup.empty() ? std::nan("") : result.sup.back())},
          {"T_fit", number(result.T_fit)},
          {"fit_slope", number(result.fit_slope)},
          {"fit_r2", number(result.fit_r2)},
          {"fit_samples", result.fit_samples},
          {"profile_distance", number(result.profile_distance)}};
}

json certificate(const quad::RationalEvenFunction& ref, const quad::Rational& lo,
                 const quad::Rational& hi, const quad::IntegralResult& result) {
  json poly = json::array();
  for (const auto& c : ref.poly) poly.push_back(record_json(c.record()));
  json poles = json::array();
  for (std::size_t i = 0; i < ref.poles.size(); ++i) {
    if (ref.poles[i].is_zero()) continue;
    poles.push_back({{"order", i + 1}, {"coefficient", record_json(ref.poles[i].record())}});
  }
  json j = {{"m", ref.m},
            {"a", record_json(ref.a.record())},
            {"b", record_json(ref.b.record())},
            {"poly_coeffs", poly},
            {"pole_coeffs", poles},
            {"interval", {quad::to_string(lo), quad::to_string(hi)}},
            {"value", number(result.value)},
            {"error_bound", number(result.error_bound)}};
  if (result.exact) {
    j["value_decimal"] = result.exact->value_decimal;
    j["closed_form"] = to_json(*result.exact);
  }
  return j;
}

std::string trace_csv(const evolve::EvolutionTrace& trace) {
  std::ostringstream out;
  out << "tau,sup,sigma,xproxy,c1\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_double(trace.tau[i]) << ',' << format_double(trace.sup[i]) << ','
        << format_double(trace.sigma[i]) << ',' << format_double(trace.x_proxy[i]) << ','
        << format_double(trace.c1[i]) << '\n';
  }
  return out.str();
}

evolve::EvolutionTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "tau,sup,sigma,xproxy,c1") {
    throw std::invalid_argument("trace_from_csv: unexpected header");
  }
  evolve::EvolutionTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 5) throw std::invalid_argument("trace_from_csv: expected 5 columns");
    trace.tau.push_back(parse_double(fields[0]));
    trace.sup.push_back(parse_double(fields[1]));
    trace.sigma.push_back(parse_double(fields[2]));
    trace.x_proxy.push_back(parse_double(fields[3]));
    trace.c1.push_back(parse_double(fields[4]));
  }
  return trace;
}

std::string json_lines(const std::vector<json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::vector<json> parse_json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace ymflow::report
