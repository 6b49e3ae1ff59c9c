#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ymflow/acceptance.hpp"
#include "ymflow/evolve.hpp"
#include "ymflow/exact_pf.hpp"
#include "ymflow/ggmt.hpp"
#include "ymflow/model.hpp"
#include "ymflow/physical.hpp"
#include "ymflow/report.hpp"
#include "ymflow/spectral.hpp"

namespace ymflow::cli {
namespace {

using report::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out_dir;
  std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_dir, "Directory for output files (stdout only when empty)");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

Dimension dimension_from(int d, int n) {
  if (d > 0 && n > 0 && n != d + 2) throw UsageError("--d and --n disagree (n = d + 2)");
  if (n > 0) d = n - 2;
  if (d <= 0) throw UsageError("one of --d or --n is required");
  return make_dimension(d);
}

void emit(std::ostream& out, const Common& c, const std::string& file, const std::string& content) {
  out << content;
  if (!c.out_dir.empty()) report::write_text(fs::path(c.out_dir) / file, content);
}

std::string csv_from_records(const std::vector<json>& records) {
  std::vector<std::string> keys;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.items()) {
      if (!v.is_structured() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out << ',';
      if (!r.contains(keys[i])) continue;
      const auto& v = r.at(keys[i]);
      if (v.is_number_float()) {
        out << report::format_double(v.get<double>());
      } else if (v.is_string()) {
        const auto text = v.get<std::string>();
        if (text.find_first_of(",\"\n") == std::string::npos) {
          out << text;
        } else {
          out << '"';
          for (char ch : text) out << (ch == '"' ? "\"\"" : std::string(1, ch));
          out << '"';
        }
      } else {
        out << v.dump();
      }
    }
    out << '\n';
  }
  return out.str();
}

// profile ---------------------------------------------------------------

struct ProfileArgs {
  int d = 0;
  int n = 0;
  double rho_max = 10.0;
  int samples = 100;
  Common c{.out_dir = "", .format = "csv"};
};

int run_profile(const ProfileArgs& a, std::ostream& out) {
  const Dimension dim = dimension_from(a.d, a.n);
  if (a.samples < 2 || !(a.rho_max > 0.0)) throw UsageError("need --samples >= 2 and --rho-max > 0");
  std::vector<json> rows;
  for (int k = 0; k < a.samples; ++k) {
    const double rho = a.rho_max * k / (a.samples - 1);
    auto singular = [&](ProfileKind kind) {
      return rho > 0.0 ? eval_profile(kind, dim, rho) : std::nan("");
    };
    rows.push_back({{"rho", report::number(rho)},
                    {"W", report::number(eval_profile(ProfileKind::W, dim, rho))},
                    {"V", report::number(eval_profile(ProfileKind::V, dim, rho))},
                    {"q", report::number(singular(ProfileKind::qFree))},
                    {"Q", report::number(singular(ProfileKind::QSusy))},
                    {"gTilde", report::number(eval_profile(ProfileKind::gTilde, dim, rho))}});
  }
  if (a.c.format == "csv") {
    std::ostringstream csv;
    csv << "rho,W,V,q,Q,gTilde\n";
    for (const auto& r : rows) {
      csv << report::format_double(report::to_double(r["rho"])) << ','
          << report::format_double(report::to_double(r["W"])) << ','
          << report::format_double(report::to_double(r["V"])) << ','
          << report::format_double(report::to_double(r["q"])) << ','
          << report::format_double(report::to_double(r["Q"])) << ','
          << report::format_double(report::to_double(r["gTilde"])) << '\n';
    }
    emit(out, a.c, "profile.csv", csv.str());
  } else {
    json header = {{"dimension", report::to_json(dim)}};
    std::vector<json> all{header};
    all.insert(all.end(), rows.begin(), rows.end());
    emit(out, a.c, "profile.jsonl", report::json_lines(all));
  }
  return 0;
}

// ggmt ------------------------------------------------------------------

struct GgmtArgs {
  int d = 0;
  int n = 0;
  double p = 0.0;
  std::string pathway = "all";
  bool certificate = false;
  std::string scan;
  Common c;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("--scan-p expects LO..HI");
  try {
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("--scan-p expects integers LO..HI");
  }
}

int run_ggmt(const GgmtArgs& a, std::ostream& out) {
  std::vector<std::pair<Dimension, double>> jobs;
  if (a.d == 0 && a.n == 0) {
    if (a.p != 0.0) throw UsageError("--p needs --n or --d");
    for (const auto& [n, p] : {std::pair{8, 4}, {9, 4}, {10, 6}, {11, 6}}) jobs.emplace_back(make_dimension(n - 2), p);
  } else {
    jobs.emplace_back(dimension_from(a.d, a.n), a.p == 0.0 ? 4.0 : a.p);
  }
  std::vector<ggmt::Pathway> pathways;
  if (a.pathway == "all") {
    pathways = {ggmt::Pathway::paperOverestimate, ggmt::Pathway::tightQminus, ggmt::Pathway::exactCertificate};
  } else if (const auto pw = ggmt::parse_pathway(a.pathway)) {
    pathways = {*pw};
  } else {
    throw UsageError("unknown --pathway " + a.pathway);
  }

  std::vector<json> records;
  if (!a.scan.empty()) {
    const auto [lo, hi] = parse_range(a.scan);
    for (const auto& [dim, p] : jobs) {
      const auto scan = ggmt::scan_p(dim, lo, hi);
      for (const auto& r : scan.reports) records.push_back(report::to_json(r));
      records.push_back({{"n", dim.n}, {"best_p", report::number(scan.best_p)}, {"best_B", report::number(scan.best_B)}});
    }
  } else {
    for (const auto& [dim, p] : jobs) {
      for (auto pathway : pathways) {
        const auto r = ggmt::compute_B(dim, p, pathway);
        json j = report::to_json(r);
        if (a.certificate && pathway == ggmt::Pathway::exactCertificate) {
          const auto ref = quad::expand_integrand(dim, static_cast<int>(p));
          j["certificate"] = report::certificate(ref, 0, quad::parse_rational(r.upper_limit_exact), r.integral);
        }
        records.push_back(std::move(j));
      }
    }
  }
  if (a.c.format == "csv") {
    emit(out, a.c, "ggmt.csv", csv_from_records(records));
  } else {
    emit(out, a.c, "ggmt.jsonl", report::json_lines(records));
  }
  return 0;
}

// spectrum --------------------------------------------------------------

struct SpectrumArgs {
  int d = 0;
  int n = 0;
  double R = 20.0;
  std::size_t N = 4000;
  int k = 5;
  std::string spec = "linearized";
  bool extrapolate = false;
  Common c;
};

int run_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const Dimension dim = dimension_from(a.d, a.n);
  const auto kind = spectral::parse_potential(a.spec);
  if (!kind) throw UsageError("unknown --spec " + a.spec);
  const spectral::OperatorSpec spec{dim, *kind};
  const auto result = a.extrapolate ? spectral::eigen_extrapolated(spec, a.R, a.N, a.k)
                                    : spectral::eigen_lowest(spectral::discretize(spec, RadialGrid(a.R, a.N)), a.k);
  json j = report::to_json(result);
  j["n"] = dim.n;
  j["spec"] = a.spec;
  if (a.c.format == "csv") {
    std::ostringstream csv;
    csv << "index,eigenvalue,residual,extrapolated\n";
    for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
      csv << i << ',' << report::format_double(result.eigenvalues[i]) << ','
          << report::format_double(result.residual_norms[i]) << ','
          << (result.extrapolated ? report::format_double((*result.extrapolated)[i]) : "") << '\n';
    }
    emit(out, a.c, "spectrum.csv", csv.str());
  } else {
    emit(out, a.c, "spectrum.json", j.dump() + "\n");
  }
  return 0;
}

// evolve ----------------------------------------------------------------

struct EvolveArgs {
  int d = 6;
  double R = 20.0;
  std::size_t N = 2000;
  double dt = 1e-2;
  double tau_max = 10.0;
  double theta = 0.5;
  double eps = 1e-2;
  double T = 1.0;
  double delta = 0.1;
  bool shoot = false;
  std::string model = "full";
  std::string bc = "dirichlet";
  Common c;
};

int run_evolve(const EvolveArgs& a, std::ostream& out) {
  evolve::SolverConfig cfg;
  cfg.dim = make_dimension(a.d);
  cfg.grid = RadialGrid(a.R, a.N);
  cfg.dt = a.dt;
  cfg.tau_max = a.tau_max;
  cfg.theta = a.theta;
  if (a.model == "full") {
    cfg.model = evolve::Model::full;
  } else if (a.model == "linearized") {
    cfg.model = evolve::Model::linearized;
  } else if (a.model == "free") {
    cfg.model = evolve::Model::free;
  } else {
    throw UsageError("unknown --model " + a.model);
  }
  cfg.bc = a.bc == "extrapolated" ? evolve::OuterBC::extrapolated : evolve::OuterBC::dirichletZero;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double eps = a.eps;
  const auto v = GridFunction::sample(cfg.grid, cfg.dim, [eps](double r) { return eps * std::exp(-r * r); });

  json meta = {{"config", report::to_json(cfg)}, {"eps", report::number(a.eps)}};
  evolve::EvolutionTrace trace;
  if (a.shoot) {
    const auto shot = evolve::shoot_T(v, a.delta, cfg);
    meta["shoot"] = report::to_json(shot);
    trace = shot.final_trace;
  } else {
    trace = evolve::run_similarity(v, a.T, cfg);
    meta["T"] = report::number(a.T);
    meta["blowup"] = trace.blowup;
    meta["samples"] = trace.size();
  }
  if (trace.size() >= 10 && !trace.blowup) {
    const double lo = std::min(2.0, 0.25 * a.tau_max);
    try {
      const auto fit = evolve::fit_decay_rate(trace, lo, std::min(8.0, a.tau_max));
      meta["omega"] = report::number(fit.omega);
      meta["omega_r2"] = report::number(fit.r2);
    } catch (const std::invalid_argument&) {
    }
  }
  const std::string csv = report::trace_csv(trace);
  if (a.c.format == "csv") {
    emit(out, a.c, "trace.csv", csv);
  } else {
    emit(out, a.c, "run.json", meta.dump() + "\n");
    if (!a.c.out_dir.empty()) report::write_text(fs::path(a.c.out_dir) / "trace.csv", csv);
  }
  return 0;
}

// blowup ----------------------------------------------------------------

struct BlowupArgs {
  int d = 6;
  double R = 5.0;
  std::size_t N = 8000;
  double amp = 1.0;
  double eps = 0.0;
  double cfl = 1e-3;
  double dt_max = 1e-2;
  double t_max = 10.0;
  double theta = 0.5;
  Common c;
};

int run_blowup(const BlowupArgs& a, std::ostream& out) {
  evolve::PhysicalConfig cfg;
  cfg.dim = make_dimension(a.d);
  cfg.grid = RadialGrid(a.R, a.N);
  cfg.cfl = a.cfl;
  cfg.dt_max = a.dt_max;
  cfg.t_max = a.t_max;
  cfg.theta = a.theta;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Dimension dim = cfg.dim;
  const double amp = a.amp;
  const double eps = a.eps;
  auto u0 = [&dim, amp, eps](double r) {
    return amp * evolve::self_similar_data(dim, r) + eps * std::exp(-r * r);
  };
  const auto result = evolve::run_physical(u0, cfg);
  json j = report::to_json(result);
  j["d"] = a.d;
  j["amp"] = report::number(a.amp);
  j["eps"] = report::number(a.eps);
  std::ostringstream csv;
  csv << "t,sup\n";
  for (std::size_t i = 0; i < result.t.size(); ++i) {
    csv << report::format_double(result.t[i]) << ',' << report::format_double(result.sup[i]) << '\n';
  }
  if (a.c.format == "csv") {
    emit(out, a.c, "sup.csv", csv.str());
  } else {
    emit(out, a.c, "blowup.json", j.dump() + "\n");
    if (!a.c.out_dir.empty()) report::write_text(fs::path(a.c.out_dir) / "sup.csv", csv.str());
  }
  return 0;
}

// report ----------------------------------------------------------------

struct ReportArgs {
  std::string input;
  Common c;
};

int run_report(const ReportArgs& a, std::ostream& out) {
  const auto records = report::parse_json_lines(report::read_text(a.input));
  if (a.c.format == "csv") {
    emit(out, a.c, "report.csv", records.empty() ? std::string() : csv_from_records(records));
  } else {
    emit(out, a.c, "report.jsonl", report::json_lines(records));
  }
  return 0;
}

// repro -----------------------------------------------------------------

struct ReproArgs {
  std::vector<int> criteria;
  std::string out_dir;
};

int run_repro(const ReproArgs& a, std::ostream& out) {
  const auto ids = a.criteria.empty() ? acceptance::criterion_ids() : a.criteria;
  const auto results = acceptance::run(ids, [&out](const acceptance::CriterionResult& r) {
    out << acceptance::format_line(r) << '\n' << std::flush;
  });
  int failures = 0;
  std::ostringstream table;
  table << "| criterion | name | verdict | seconds |\n|---|---|---|---|\n";
  std::vector<json> lines;
  for (const auto& r : results) {
    if (!r.passed) ++failures;
    table << "| " << r.id << " | " << r.name << " | " << (r.passed ? "pass" : "FAIL") << " | "
          << report::format_double(std::round(r.seconds * 100.0) / 100.0) << " |\n";
    lines.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds}, {"detail", r.detail}});
  }
  if (!a.out_dir.empty()) {
    report::write_text(fs::path(a.out_dir) / "summary.md", table.str());
    report::write_text(fs::path(a.out_dir) / "summary.jsonl", report::json_lines(lines));
  }
  out << results.size() - static_cast<std::size_t>(failures) << "/" << results.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-similar blowup of the equivariant Yang-Mills heat flow: constants, GGMT bound, spectra, evolution"};
  app.name("ymflow");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");

  ProfileArgs profile;
  auto* p_profile = app.add_subcommand("profile", "Tabulate W, V, q, Q and gTilde");
  p_profile->add_option("--d", profile.d, "Space dimension d");
  p_profile->add_option("--n", profile.n, "n = d + 2");
  p_profile->add_option("--rho-max", profile.rho_max, "Largest rho")->capture_default_str();
  p_profile->add_option("--samples", profile.samples, "Number of equally spaced rows")->capture_default_str();
  add_common(p_profile, profile.c);

  GgmtArgs g;
  auto* p_ggmt = app.add_subcommand("ggmt", "B(n,p) for the partner operator; default: the four reference pairs");
  p_ggmt->add_option("--d", g.d, "Space dimension d");
  p_ggmt->add_option("--n", g.n, "n = d + 2");
  p_ggmt->add_option("--p", g.p, "Exponent p (default 4 with --n)");
  p_ggmt->add_option("--pathway", g.pathway, "paper | tight | exact | all")->capture_default_str();
  p_ggmt->add_flag("--certificate", g.certificate, "Attach the exact partial-fraction record");
  p_ggmt->add_option("--scan-p", g.scan, "Sweep integer p over LO..HI (tight pathway)");
  add_common(p_ggmt, g.c);

  SpectrumArgs s;
  auto* p_spec = app.add_subcommand("spectrum", "Lowest eigenvalues of a half-line operator");
  p_spec->add_option("--d", s.d, "Space dimension d");
  p_spec->add_option("--n", s.n, "n = d + 2");
  p_spec->add_option("--R", s.R, "Truncation radius")->capture_default_str();
  p_spec->add_option("--N", s.N, "Interior nodes (>= 500)")->capture_default_str();
  p_spec->add_option("--k", s.k, "Number of eigenvalues (<= 10)")->capture_default_str();
  p_spec->add_option("--spec", s.spec, "linearized | free | susy")->capture_default_str();
  p_spec->add_flag("--extrapolate", s.extrapolate, "Richardson combination with 2N+1 nodes");
  add_common(p_spec, s.c);

  EvolveArgs e;
  auto* p_evolve = app.add_subcommand("evolve", "Similarity-coordinate evolution of T W(sqrt(T) .) + T v(sqrt(T) .), v = eps exp(-rho^2)");
  p_evolve->add_option("--d", e.d, "Space dimension d")->capture_default_str();
  p_evolve->add_option("--R", e.R, "Truncation radius")->capture_default_str();
  p_evolve->add_option("--N", e.N, "Interior nodes")->capture_default_str();
  p_evolve->add_option("--dt", e.dt, "Time step in tau (<= 0.1)")->capture_default_str();
  p_evolve->add_option("--tau-max", e.tau_max, "Horizon")->capture_default_str();
  p_evolve->add_option("--theta", e.theta, "Implicitness weight in [1/2, 1]")->capture_default_str();
  p_evolve->add_option("--eps", e.eps, "Perturbation amplitude")->capture_default_str();
  p_evolve->add_option("--T", e.T, "Blowup time used for the data (ignored with --shoot)")->capture_default_str();
  p_evolve->add_flag("--shoot", e.shoot, "Bisect on T in [1 - delta, 1 + delta]");
  p_evolve->add_option("--delta", e.delta, "Half-width of the shooting bracket")->capture_default_str();
  p_evolve->add_option("--model", e.model, "full | linearized | free")->capture_default_str();
  p_evolve->add_option("--bc", e.bc, "Outer boundary")->check(CLI::IsMember({"dirichlet", "extrapolated"}))->capture_default_str();
  add_common(p_evolve, e.c);

  BlowupArgs b;
  auto* p_blowup = app.add_subcommand("blowup", "Physical-variable run from amp W + eps exp(-r^2)");
  p_blowup->add_option("--d", b.d, "Space dimension d")->capture_default_str();
  p_blowup->add_option("--R", b.R, "Truncation radius")->capture_default_str();
  p_blowup->add_option("--N", b.N, "Interior nodes")->capture_default_str();
  p_blowup->add_option("--amp", b.amp, "Multiple of the self-similar data")->capture_default_str();
  p_blowup->add_option("--eps", b.eps, "Gaussian perturbation amplitude")->capture_default_str();
  p_blowup->add_option("--cfl", b.cfl, "dt = min(dt-max, cfl / sup u)")->capture_default_str();
  p_blowup->add_option("--dt-max", b.dt_max, "Largest step")->capture_default_str();
  p_blowup->add_option("--t-max", b.t_max, "Horizon")->capture_default_str();
  p_blowup->add_option("--theta", b.theta, "Implicitness weight in [1/2, 1]")->capture_default_str();
  add_common(p_blowup, b.c);

  ReportArgs r;
  auto* p_report = app.add_subcommand("report", "Re-emit a JSON-lines file as JSON lines or CSV");
  p_report->add_option("--in", r.input, "JSON-lines input")->required();
  add_common(p_report, r.c);

  ReproArgs rp;
  auto* p_repro = app.add_subcommand("repro", "Run the acceptance criteria and write a summary table");
  p_repro->add_option("--criteria", rp.criteria, "Subset of criterion ids (default all)");
  p_repro->add_option("--out", rp.out_dir, "Directory for summary.md and summary.jsonl");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << ex.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (p_profile->parsed()) return run_profile(profile, out);
    if (p_ggmt->parsed()) return run_ggmt(g, out);
    if (p_spec->parsed()) return run_spectrum(s, out);
    if (p_evolve->parsed()) return run_evolve(e, out);
    if (p_blowup->parsed()) return run_blowup(b, out);
    if (p_report->parsed()) return run_report(r, out);
    if (p_repro->parsed()) return run_repro(rp, out);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    out << json{{"error", ex.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace ymflow::cli
