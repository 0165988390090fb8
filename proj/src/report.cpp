#include "skewgeo/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json inequality_json(const InequalityReport& t) {
  json j;
  j["lhs"] = num(t.lhs);
  j["lhs_components"] = num(t.lhs_components);
  j["m2"] = t.m2;
  j["theta"] = num(t.theta);
  j["norm2_grad_T_ln_f"] = num(t.norm2_T);
  j["norm2_grad_theta_ln_f"] = num(t.norm2_theta);
  j["rhs_statement_i"] = num(t.rhs_statement_i);
  j["rhs_statement_ii"] = num(t.rhs_statement_ii);
  j["rhs_proof_variant_i"] = num(t.rhs_proof_variant_i);
  j["margin"] = num(t.margin);
  j["hypothesis_flags"] = {{"sasakian_ambient", t.flags.sasakian_ambient},
                           {"mixed_tg_perp_theta", t.flags.mixed_tg_perp_theta},
                           {"xi_location", to_string(t.flags.xi_location)},
                           {"order1_skewcr", t.flags.order1_skewcr}};
  const auto& e = t.equality;
  j["equality_diagnostics"] = {{"sigma_D_D", num(e.sigma_D_D)},
                               {"sigma_perp_theta", num(e.sigma_perp_theta)},
                               {"sigma_theta_theta", num(e.sigma_theta_theta)},
                               {"sigma_D_theta", num(e.sigma_D_theta)},
                               {"sigma_D_perp_outside_phi_perp", num(e.D_perp_outside_phi_perp)},
                               {"sigma_perp_perp_outside_F_theta", num(e.perp_perp_outside_F_theta)}};
  return j;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  throw Error("unknown report format '" + s + "' (expected json or text)");
}

std::string to_json(const VerificationReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["tool_version"] = r.tool_version;
  j["stage"] = r.stage;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["passed"] = r.passed();
  j["constants"] = json::object();
  for (const auto& [k, v] : r.constants) j["constants"][k] = num(v);
  j["tolerances"] = json::object();
  for (const auto& k : Tolerances::keys()) j["tolerances"][k] = num(r.tolerances.at(k));
  j["ambient"] = {{"almost_contact", num(r.ambient.almost_contact)},
                  {"compatibility", num(r.ambient.compatibility)},
                  {"contact_metric", num(r.ambient.contact_metric)},
                  {"normality", num(r.ambient.normality)},
                  {"sasakian", num(r.ambient.sasakian)},
                  {"xi_derivative", num(r.ambient.xi_derivative)},
                  {"sasakian_ambient", r.sasakian_ambient}};
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"stage", c.stage},
                           {"name", c.name},
                           {"value", num(c.value)},
                           {"tolerance", num(c.tolerance)},
                           {"verdict", to_string(c.verdict)}});
  j["degenerate"] = json::array();
  for (const auto& d : r.degenerate) {
    json p = json::array();
    for (Eigen::Index i = 0; i < d.p.size(); ++i) p.push_back(num(d.p[i]));
    j["degenerate"].push_back({{"index", d.index}, {"point", p}, {"message", d.message}});
  }
  if (r.split) {
    const auto& s = *r.split;
    json blocks = json::array();
    for (const auto& b : s.blocks)
      blocks.push_back({{"kind", b.kind}, {"dim", b.dim}, {"eigenvalue", num(b.eigenvalue)}, {"angle", num(b.angle)}});
    j["split"] = {{"label", s.label},
                  {"dims", {s.dim_D, s.dim_perp, s.dim_theta}},
                  {"xi_tangent", s.xi_tangent},
                  {"blocks", blocks},
                  {"angle_spread", num(s.angle_spread)},
                  {"dims_constant", s.dims_constant},
                  {"normal_dims", {s.normal_phi_perp, s.normal_f_theta, s.normal_mu}}};
  }
  if (r.warped) {
    const auto& w = *r.warped;
    j["warped"] = {{"verdict", w.verdict},
                   {"block_offdiag", num(w.offdiag)},
                   {"base_dependence", num(w.base_dependence)},
                   {"consistency", num(w.consistency)},
                   {"f_reference", num(w.f_reference)},
                   {"f_min", num(w.f_min)},
                   {"f_max", num(w.f_max)},
                   {"f_spread", num(w.f_spread)},
                   {"f_expr_error", opt(w.expr_error)},
                   {"max_abs_xi_ln_f", num(w.max_abs_xi_ln_f)}};
  }
  if (r.theorem) {
    json t = inequality_json(r.theorem->at_point);
    json p = json::array();
    for (double v : r.theorem->point) p.push_back(num(v));
    t["point"] = p;
    t["min_margin"] = num(r.theorem->min_margin);
    t["max_lhs_path_gap"] = num(r.theorem->max_path_gap);
    j["theorem41"] = t;
  }
  return j.dump(2) + "\n";
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  os << "scenario " << r.scenario << "  stage " << r.stage << "  seed " << r.seed << "  samples " << r.samples
     << "  version " << r.tool_version << "\n";
  if (r.split)
    os << "split: " << r.split->label << "  dims (D, perp, theta) = (" << r.split->dim_D << ", " << r.split->dim_perp
       << ", " << r.split->dim_theta << ")" << (r.split->xi_tangent ? " + <xi>" : "") << "\n";
  if (r.warped) os << "warped: " << r.warped->verdict << "\n";
  if (r.theorem) {
    const auto& t = r.theorem->at_point;
    os << "inequality: |sigma|^2 = " << fmt(t.lhs) << "  rhs(i) = " << fmt(t.rhs_statement_i)
       << "  rhs(ii) = " << fmt(t.rhs_statement_ii) << "  rhs csc variant = " << fmt(t.rhs_proof_variant_i)
       << "  margin = " << fmt(t.margin) << "\n";
  }
  if (!r.degenerate.empty()) os << "degenerate samples: " << r.degenerate.size() << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-44s %14s %14s  %s\n", "check", "value", "tolerance", "verdict");
  os << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-44s %14s %14s  %s\n", c.name.c_str(), fmt(c.value).c_str(),
                  fmt(c.tolerance).c_str(), to_string(c.verdict).c_str());
    os << line;
  }
  os << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

void emit_report(const VerificationReport& r, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report to '" + path.string() + "'");
  out << (format == ReportFormat::Json ? to_json(r) : to_text(r));
  if (!out) throw Error("failed writing report to '" + path.string() + "'");
}

}  // namespace skewgeo
