#include "skewgeo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SampleResult {
  bool degenerate = false;
  std::string error;
  GeometrySample s;
  SampleDiagnostics diag;
  SffNorm2 sff;
  TFPair tf;
  TFResiduals tfr;
  std::optional<DistributionSplit> split;
  bool spectrum_error = false;
  std::vector<SlantResiduals> slant;
  std::optional<NormalSplit> normal;
  bool normal_error = false;
  double sigma_xi_F = kNaN;
  double mixed_perp_theta = 0.0;
  double mixed_D_perp = 0.0;

  std::optional<LnFGradient> grad;
  BishopResidual bishop;
  std::vector<NamedResidual> lemmas;
  std::optional<InequalityReport> inequality;
};

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

double worst(double a, double b) { return std::isnan(b) ? a : std::max(a, b); }

class CheckList {
 public:
  explicit CheckList(std::vector<Check>& out) : out_(out) {}
  void add(const std::string& stage, const std::string& name, double value, double tol, bool asserted) {
    Verdict v = Verdict::Info;
    if (asserted) v = (value <= tol) ? Verdict::Pass : Verdict::Fail;  // NaN fails
    out_.push_back({stage, name, value, tol, v});
  }

 private:
  std::vector<Check>& out_;
};

void geometry_stage(const BuiltScenario& b, const std::vector<int>& ordering, const Tolerances& tol,
                    const Eigen::VectorXd& p, SampleResult& r) {
  try {
    r.s = second_fundamental_form(b.immersion, p, ordering, tol);
  } catch (const DegenerateError& e) {
    r.degenerate = true;
    r.error = e.what();
    return;
  } catch (const DomainError& e) {
    r.degenerate = true;
    r.error = e.what();
    return;
  }
  r.diag = diagnose(r.s);
  r.sff = sff_norm2(r.s);
  r.tf = tf_decompose(r.s, tol.xi_tangent);
  r.tfr = tf_residuals(r.s, r.tf);
  try {
    r.split = classify(r.s, r.tf, tol.cluster, tol.eigen_range);
  } catch (const ConsistencyError&) {
    r.spectrum_error = true;
    return;
  }
  for (const auto& blk : r.split->blocks)
    if (blk.kind == BlockKind::Slant) r.slant.push_back(verify_slant_identities(r.s, r.tf, blk, r.split->xi));
  try {
    r.normal = classify_normal(r.s, r.tf, *r.split, tol.normal_split);
  } catch (const ConsistencyError&) {
    r.normal_error = true;
  }
  if (r.tf.xi) {
    double w = 0.0;
    for (int a = 0; a < r.s.n(); ++a) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(r.s.n(), a);
      w = std::max(w, r.s.norm(r.s.sigma_of(e, *r.tf.xi) + r.s.normal * (r.tf.F * e)));
    }
    r.sigma_xi_F = w;
  }
  r.mixed_perp_theta = mixed_tg_check(r.s, *r.split, BlockKind::AntiInvariant, BlockKind::Slant);
  r.mixed_D_perp = mixed_tg_check(r.s, *r.split, BlockKind::Invariant, BlockKind::AntiInvariant);
}

void warped_stage(const BuiltScenario& b, const WarpedStructure& ws, const HypothesisFlags& flags,
                  SampleResult& r) {
  const ProductDeclaration& decl = *b.product;
  r.grad = grad_ln_f(b.immersion, decl, ws, r.s);
  for (int a : decl.base())
    for (int c : decl.fiber) {
      const BishopResidual br = check_bishop(r.s, *r.grad, a, c);
      r.bishop.residual = std::max(r.bishop.residual, br.residual);
      r.bishop.ordering = std::max(r.bishop.ordering, br.ordering);
    }
  if (!r.split || r.normal_error) return;
  r.lemmas = lemma_residuals(r.s, r.tf, *r.split, *r.grad, decl);
  r.inequality = inequality_report(r.s, r.tf, *r.split, *r.grad, decl, flags);
}

std::optional<double> expected_angle(const Scenario& sc) {
  if (!sc.expect.cos_slant_angle) return std::nullopt;
  const double c = eval(parse(*sc.expect.cos_slant_angle, {}, sc.constants), std::span<const double>{});
  return std::acos(c);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Info: return "info";
  }
  return "?";
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == Verdict::Fail; });
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

VerificationReport run_scenario(const Scenario& sc, const RunOptions& opts) {
  const BuiltScenario b = build(sc);
  const Tolerances& tol = sc.tolerances;
  VerificationReport rep;
  rep.scenario = sc.name;
  rep.seed = sc.seed;
  rep.samples = sc.samples;
  rep.constants = sc.constants;
  rep.tolerances = tol;
  rep.stage = opts.stage == Stage::Ambient ? "ambient" : opts.stage == Stage::Classify ? "classify" : "verify";
  CheckList checks(rep.checks);

  // ambient
  const int N = b.ambient->dim();
  const auto chart = random_chart_points(N, 50, sc.seed);
  rep.ambient = check_structure(*b.ambient, chart, structure_directions(N, 8, sc.seed));
  rep.sasakian_ambient = rep.ambient.sasakian < tol.sasakian;
  checks.add("ambient", "ambient.almost_contact", rep.ambient.almost_contact, tol.ambient_structure, true);
  checks.add("ambient", "ambient.compatibility", rep.ambient.compatibility, tol.ambient_structure, true);
  checks.add("ambient", "ambient.contact_metric", rep.ambient.contact_metric, tol.sasakian, false);
  checks.add("ambient", "ambient.normality", rep.ambient.normality, tol.sasakian, false);
  checks.add("ambient", "ambient.sasakian", rep.ambient.sasakian, tol.sasakian, false);
  checks.add("ambient", "ambient.xi_derivative", rep.ambient.xi_derivative, tol.sasakian, false);
  if (opts.stage == Stage::Ambient) return rep;

  // per-sample geometry and classification
  std::vector<int> ordering;
  if (b.product) {
    ordering = b.product->base_T;
    ordering.insert(ordering.end(), b.product->base_theta.begin(), b.product->base_theta.end());
    ordering.insert(ordering.end(), b.product->fiber.begin(), b.product->fiber.end());
  }
  const auto points = sample_points(b.immersion, sc.samples, sc.seed);
  std::vector<SampleResult> results(points.size());
  parallel_for(static_cast<int>(points.size()), opts.threads,
               [&](int i) { geometry_stage(b, ordering, tol, points[i], results[i]); });

  std::vector<int> good;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].degenerate)
      rep.degenerate.push_back({static_cast<int>(i), points[i], results[i].error});
    else
      good.push_back(static_cast<int>(i));
  }
  const double degenerate_fraction = static_cast<double>(rep.degenerate.size()) / sc.samples;
  checks.add("immersion", "immersion.degenerate_fraction", degenerate_fraction, tol.degenerate_fraction, true);
  if (good.empty()) return rep;

  SampleDiagnostics diag;
  double sff_gap = 0.0;
  for (int i : good) {
    const auto& r = results[i];
    diag.frame_gram = std::max(diag.frame_gram, r.diag.frame_gram);
    diag.sigma_symmetry = std::max(diag.sigma_symmetry, r.diag.sigma_symmetry);
    diag.sigma_normality = std::max(diag.sigma_normality, r.diag.sigma_normality);
    diag.gauss_split = std::max(diag.gauss_split, r.diag.gauss_split);
    sff_gap = std::max(sff_gap, std::abs(r.sff.frame_contraction - r.sff.component_sum) /
                                    std::max(1.0, r.sff.frame_contraction));
  }
  checks.add("immersion", "immersion.frame_gram", diag.frame_gram, tol.frame, true);
  checks.add("immersion", "immersion.sigma_symmetry", diag.sigma_symmetry, tol.sigma, true);
  checks.add("immersion", "immersion.sigma_normality", diag.sigma_normality, tol.sigma, true);
  checks.add("immersion", "immersion.gauss_split", diag.gauss_split, tol.gauss_split, true);
  checks.add("immersion", "immersion.sff_paths", sff_gap, tol.sff_paths, true);

  TFResiduals tfr;
  int spectrum_errors = 0, normal_errors = 0, odd_slant = 0;
  double anti_T = 0.0, orthogonality = 0.0, mu_inv = 0.0, sigma_xi_F = 0.0;
  double mixed_perp_theta = 0.0, mixed_D_perp = 0.0;
  SlantResiduals sr;
  bool any_slant = false, xi_tangent_everywhere = true;
  std::vector<DistributionSplit> splits;
  for (int i : good) {
    const auto& r = results[i];
    tfr.reconstruction = std::max(tfr.reconstruction, r.tfr.reconstruction);
    tfr.antisymmetry = std::max(tfr.antisymmetry, r.tfr.antisymmetry);
    tfr.xi_kernel = std::max(tfr.xi_kernel, r.tfr.xi_kernel);
    if (!r.tf.xi) xi_tangent_everywhere = false;
    if (r.spectrum_error) {
      ++spectrum_errors;
      continue;
    }
    splits.push_back(*r.split);
    if (!r.split->even_slant_dims) ++odd_slant;
    anti_T = std::max(anti_T, r.split->anti_invariant_T);
    for (const auto& s : r.slant) {
      any_slant = true;
      sr.g_TT = std::max(sr.g_TT, s.g_TT);
      sr.g_FF = std::max(sr.g_FF, s.g_FF);
      sr.t_squared = std::max(sr.t_squared, s.t_squared);
      sr.wirtinger = std::max(sr.wirtinger, s.wirtinger);
    }
    if (r.normal_error) {
      ++normal_errors;
    } else {
      orthogonality = std::max(orthogonality, r.normal->orthogonality);
      mu_inv = std::max(mu_inv, r.normal->mu_invariance);
    }
    sigma_xi_F = worst(sigma_xi_F, r.sigma_xi_F);
    mixed_perp_theta = std::max(mixed_perp_theta, r.mixed_perp_theta);
    mixed_D_perp = std::max(mixed_D_perp, r.mixed_D_perp);
  }
  checks.add("skewcr", "skewcr.tf_reconstruction", tfr.reconstruction, tol.tf, true);
  checks.add("skewcr", "skewcr.tf_antisymmetry", tfr.antisymmetry, tol.tf, true);
  checks.add("skewcr", "skewcr.tf_xi_kernel", tfr.xi_kernel, tol.tf, true);
  checks.add("skewcr", "skewcr.q_spectrum_errors", spectrum_errors, 0.0, true);
  checks.add("skewcr", "skewcr.anti_invariant_T", anti_T, tol.cluster, true);
  checks.add("skewcr", "skewcr.odd_slant_blocks", odd_slant, 0.0, true);
  if (any_slant) {
    checks.add("skewcr", "skewcr.slant_g_TT", sr.g_TT, tol.slant, true);
    checks.add("skewcr", "skewcr.slant_g_FF", sr.g_FF, tol.slant, true);
    checks.add("skewcr", "skewcr.slant_T_squared", sr.t_squared, tol.slant, true);
    checks.add("skewcr", "skewcr.slant_wirtinger", sr.wirtinger, tol.slant, true);
  }
  checks.add("skewcr", "skewcr.normal_split_errors", normal_errors, 0.0, true);
  checks.add("skewcr", "skewcr.normal_orthogonality", orthogonality, tol.normal_split, true);
  checks.add("skewcr", "skewcr.mu_invariance", mu_inv, tol.normal_split, xi_tangent_everywhere);
  if (xi_tangent_everywhere)
    checks.add("skewcr", "skewcr.sigma_xi_plus_F", sigma_xi_F, tol.sasakian, rep.sasakian_ambient);

  if (!splits.empty()) {
    const SplitConstancy cons = compare_splits(splits);
    const SplitLabel label = overall_label(splits, tol.constancy);
    const DistributionSplit& first = splits.front();
    SplitSummary sum;
    sum.label = to_string(label);
    sum.dim_D = first.dim(BlockKind::Invariant);
    sum.dim_perp = first.dim(BlockKind::AntiInvariant);
    sum.dim_theta = first.dim(BlockKind::Slant);
    sum.xi_tangent = first.xi.has_value();
    for (const auto& blk : first.blocks) sum.blocks.push_back({to_string(blk.kind), blk.dim, blk.eigenvalue, blk.angle});
    sum.angle_spread = cons.angle_spread;
    sum.dims_constant = cons.dims_constant;
    for (int i : good)
      if (results[i].normal) {
        sum.normal_phi_perp = results[i].normal->dim_phi_perp;
        sum.normal_f_theta = results[i].normal->dim_f_slant;
        sum.normal_mu = results[i].normal->dim_mu;
        break;
      }
    checks.add("skewcr", "skewcr.dims_constant", cons.dims_constant ? 0.0 : 1.0, 0.0, true);
    checks.add("skewcr", "skewcr.angle_spread", cons.angle_spread, tol.constancy,
               first.label == SplitLabel::SkewCROrder1);
    rep.split = sum;

    if (sc.expect.label) checks.add("expect", "expect.label", sum.label == *sc.expect.label ? 0.0 : 1.0, 0.0, true);
    if (sc.expect.dims) {
      const auto& d = *sc.expect.dims;
      double mismatch = 0.0;
      for (const auto& spl : splits)
        if (spl.dim(BlockKind::Invariant) != d[0] || spl.dim(BlockKind::AntiInvariant) != d[1] ||
            spl.dim(BlockKind::Slant) != d[2])
          mismatch += 1.0;
      checks.add("expect", "expect.dims", mismatch, 0.0, true);
    }
    if (const auto angle = expected_angle(sc)) {
      double err = 0.0;
      for (const auto& spl : splits)
        err = spl.slant() ? std::max(err, std::abs(spl.slant()->angle - *angle)) : kNaN;
      checks.add("expect", "expect.cos_slant_angle", err, tol.slant, true);
    }
  }
  if (opts.stage == Stage::Classify || !b.product) return rep;

  // warped structure, single-threaded
  const ProductDeclaration& decl = *b.product;
  std::vector<Eigen::VectorXd> good_points;
  for (int i : good) good_points.push_back(points[i]);
  const WarpedStructure ws = extract_warping(b.immersion, decl, good_points, tol);
  WarpSummary wsum;
  wsum.verdict = to_string(ws.verdict);
  wsum.offdiag = ws.block.offdiag;
  wsum.base_dependence = ws.block.base_dependence;
  wsum.consistency = ws.consistency;
  wsum.f_reference = ws.f_reference;
  wsum.f_min = ws.f_values.minCoeff();
  wsum.f_max = ws.f_values.maxCoeff();
  wsum.f_spread = ws.f_spread;
  wsum.expr_error = ws.expr_error;
  checks.add("warped", "warped.block_offdiag", ws.block.offdiag, tol.block, false);
  checks.add("warped", "warped.base_dependence", ws.block.base_dependence, tol.block, false);
  checks.add("warped", "warped.consistency", ws.consistency, tol.warp, false);
  checks.add("warped", "warped.f_spread", ws.f_spread, tol.f_constant, false);
  if (ws.expr_error) checks.add("warped", "warped.f_expr_error", *ws.expr_error, tol.warp_expr, ws.established());
  if (sc.expect.verdict)
    checks.add("expect", "expect.verdict", wsum.verdict == *sc.expect.verdict ? 0.0 : 1.0, 0.0, true);

  const bool order1 = rep.split && rep.split->label == to_string(SplitLabel::SkewCROrder1);
  HypothesisFlags flags;
  flags.sasakian_ambient = rep.sasakian_ambient;
  flags.mixed_tg_perp_theta = mixed_perp_theta <= tol.mixed_tg;
  flags.xi_location = decl.xi_location;
  flags.order1_skewcr = order1;

  if (!ws.established()) {
    rep.warped = wsum;
    return rep;
  }

  parallel_for(static_cast<int>(good.size()), opts.threads,
               [&](int k) { warped_stage(b, ws, flags, results[good[k]]); });

  BishopResidual bishop;
  std::vector<NamedResidual> lemmas;
  double min_margin = std::numeric_limits<double>::infinity(), path_gap = 0.0;
  bool have_inequality = false;
  for (int i : good) {
    const auto& r = results[i];
    bishop.residual = std::max(bishop.residual, r.bishop.residual);
    bishop.ordering = std::max(bishop.ordering, r.bishop.ordering);
    wsum.max_abs_xi_ln_f = std::max(wsum.max_abs_xi_ln_f, std::abs(r.grad->xi_ln_f));
    if (lemmas.empty()) lemmas = r.lemmas;
    for (std::size_t j = 0; j < r.lemmas.size() && j < lemmas.size(); ++j)
      if (r.lemmas[j].value) lemmas[j].value = std::max(lemmas[j].value.value_or(0.0), *r.lemmas[j].value);
    if (r.inequality) {
      have_inequality = true;
      if (!std::isnan(r.inequality->margin)) min_margin = std::min(min_margin, r.inequality->margin);
      path_gap = std::max(path_gap, std::abs(r.inequality->lhs - r.inequality->lhs_components));
    }
  }
  rep.warped = wsum;
  checks.add("warped", "warped.bishop", bishop.residual, tol.bishop, true);
  checks.add("warped", "warped.bishop_ordering", bishop.ordering, tol.torsion, true);
  const bool xi_in_base = decl.xi_location != XiLocation::Fiber && xi_tangent_everywhere;
  checks.add("warped", "warped.xi_ln_f", wsum.max_abs_xi_ln_f, tol.xi_ln_f, xi_in_base && decl.warping.has_value());
  checks.add("warped", "warped.mixed_tg_perp_theta", mixed_perp_theta, tol.mixed_tg, false);
  checks.add("warped", "warped.mixed_tg_D_perp", mixed_D_perp, tol.mixed_tg, false);
  if (xi_in_base)
    checks.add("warped", "warped.mixed_D_perp_forces_constant_f",
               mixed_D_perp <= tol.mixed_tg && ws.verdict == WarpVerdict::WarpedProduct ? ws.f_spread : 0.0,
               tol.f_constant, rep.sasakian_ambient);
  else
    checks.add("warped", "warped.xi_in_fiber_constant_f", ws.f_spread, tol.f_constant, rep.sasakian_ambient);

  for (const auto& l : lemmas)
    checks.add("lemma", "lemma." + l.name, l.value.value_or(kNaN), tol.lemma, rep.sasakian_ambient && l.value);

  if (!have_inequality) return rep;
  checks.add("theorem", "theorem.lhs_paths", path_gap, tol.sff_paths, true);
  const bool hypotheses =
      flags.sasakian_ambient && flags.mixed_tg_perp_theta && flags.order1_skewcr && xi_in_base;
  checks.add("theorem", "theorem.margin_deficit", std::isinf(min_margin) ? kNaN : -min_margin, tol.theorem_margin,
             hypotheses);

  TheoremSummary th;
  th.min_margin = std::isinf(min_margin) ? kNaN : min_margin;
  th.max_path_gap = path_gap;
  if (sc.probe) {
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(sc.probe->data(), sc.probe->size());
    SampleResult r;
    geometry_stage(b, ordering, tol, p, r);
    if (r.degenerate) throw DegenerateError("probe point is degenerate: " + r.error);
    warped_stage(b, ws, flags, r);
    if (!r.inequality) throw ConsistencyError("probe point could not be classified");
    th.point = *sc.probe;
    th.at_point = *r.inequality;
  } else {
    for (int i : good)
      if (results[i].inequality) {
        th.point.assign(points[i].data(), points[i].data() + points[i].size());
        th.at_point = *results[i].inequality;
        break;
      }
  }
  rep.theorem = th;
  return rep;
}

}  // namespace skewgeo
