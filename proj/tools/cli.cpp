#include "ncball/cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ncball/casestudy.hpp"
#include "ncball/decomposition.hpp"
#include "ncball/io.hpp"
#include "ncball/matcore.hpp"
#include "ncball/ncexpr.hpp"
#include "ncball/realization.hpp"
#include "ncball/similarity.hpp"
#include "ncball/specrad.hpp"

namespace ncball::cli {

namespace {

using io::Json;

struct Options {
  std::string space = "row";
  std::string tuple;
  std::string real;
  std::string point;
  std::string expr;
  std::string save;
  std::string witness_out;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  int nmax = 8;
  int restarts = 8;
  int d = 0;
  int demo_n = 14;
  bool minimize = false;
};

// What a command hands back: results, the inputs that feed the digest and
// the exit code.
struct Outcome {
  Json results = Json::object();
  Json inputs = Json::object();
  std::string summary;
  int code = kExitOk;
};

OpSpaceSpec load_space(const std::string& text, int d, Json& inputs) {
  const std::string prefix = "pencil:";
  if (text.rfind(prefix, 0) == 0) {
    const Json j = io::read_json_file(text.substr(prefix.size()));
    OpSpaceSpec spec = j.contains("kind") ? io::space_from_json(j) : OpSpaceSpec::pencil(io::tuple_from_json(j));
    if (spec.d() != d)
      throw Error(ErrorCode::Dimension, "pencil has d=" + std::to_string(spec.d()) + " but the tuple has d=" + std::to_string(d));
    inputs["space"] = io::to_json(spec);
    return spec;
  }
  OpSpaceSpec spec = OpSpaceSpec::row(d);
  switch (parse_space_kind(text)) {
    case SpaceKind::Row: break;
    case SpaceKind::Column: spec = OpSpaceSpec::column(d); break;
    case SpaceKind::MinLinf: spec = OpSpaceSpec::min_linf(d); break;
    case SpaceKind::MaxL1: spec = OpSpaceSpec::max_l1(d); break;
    case SpaceKind::ConcretePencil: throw Error(ErrorCode::InvalidInput, "use --space pencil:FILE");
  }
  inputs["space"] = io::to_json(spec);
  return spec;
}

MatTuple need_tuple(const Options& o, Json& inputs) {
  if (o.tuple.empty()) throw Error(ErrorCode::InvalidInput, "--tuple FILE is required");
  MatTuple X = io::load_tuple(o.tuple);
  inputs["tuple"] = io::to_json(X);
  return X;
}

DescriptorRealization need_realization(const Options& o, Json& inputs) {
  if (!o.real.empty()) {
    DescriptorRealization R = io::load_realization(o.real);
    inputs["realization"] = io::to_json(R);
    return R;
  }
  if (!o.expr.empty()) {
    if (o.d < 1) throw Error(ErrorCode::InvalidInput, "--d N is required with --expr");
    inputs["expr"] = o.expr;
    inputs["d"] = o.d;
    return realize(parse_expr(o.expr, o.d), o.d);
  }
  throw Error(ErrorCode::InvalidInput, "--real FILE or --expr TEXT is required");
}

RadiusOptions radius_options(const Options& o) {
  RadiusOptions r;
  r.n = o.nmax;
  r.sampling.seed = o.seed;
  r.optim.seed = o.seed;
  r.optim.restarts = o.restarts;
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string interval(double lo, double hi) { return "[" + fmt(lo) + ", " + fmt(hi) + "]"; }

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_norm(const Options& o) {
  Outcome r;
  const MatTuple X = need_tuple(o, r.inputs);
  const OpSpaceSpec spec = load_space(o.space, X.d(), r.inputs);
  NormOptions no;
  no.seed = o.seed;
  const NormEstimate e = space_norm(spec, X, no);
  r.results["norm"] = io::to_json(e);
  r.summary = "norm " + interval(e.lower, e.upper) + " (" + e.method + ")";
  return r;
}

Outcome cmd_radius(const Options& o) {
  Outcome r;
  const MatTuple X = need_tuple(o, r.inputs);
  const OpSpaceSpec spec = load_space(o.space, X.d(), r.inputs);
  r.inputs["nmax"] = o.nmax;
  r.inputs["restarts"] = o.restarts;
  const RadiusEstimate e = rho_estimate(spec, X, radius_options(o));
  r.results["radius"] = io::to_json(e);
  r.summary = "radius " + interval(e.lower, e.upper) + " (" + e.method + ")";
  return r;
}

Outcome cmd_decide(const Options& o) {
  Outcome r;
  const MatTuple X = need_tuple(o, r.inputs);
  const OpSpaceSpec spec = load_space(o.space, X.d(), r.inputs);
  r.inputs["nmax"] = o.nmax;
  r.inputs["restarts"] = o.restarts;
  const Decision dec = decide_similarity_to_ball(spec, X, radius_options(o));
  r.results["decision"] = io::to_json(dec);
  if (dec.verdict == Verdict::Yes && !o.witness_out.empty() && dec.estimate.witness) {
    Json w = io::to_json(*dec.estimate.witness);
    w["conjugated"] = io::to_json(X.conjugated(dec.estimate.witness->S));
    io::save_report(w, o.witness_out);
    r.results["witness_file"] = o.witness_out;
  }
  r.summary = std::string(verdict_name(dec.verdict)) + ": " + dec.reason;
  if (dec.verdict == Verdict::Boundary) r.code = kExitUndecided;
  return r;
}

Outcome cmd_similarity(const Options& o) {
  Outcome r;
  const MatTuple X = need_tuple(o, r.inputs);
  const OpSpaceSpec spec = load_space(o.space, X.d(), r.inputs);
  r.inputs["restarts"] = o.restarts;
  OptimConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  const SimilarityWitness w = minimize_conjugated_norm(spec, X, cfg);
  r.results["witness"] = io::to_json(w);
  r.summary = "achieved norm " + fmt(w.achieved_norm) + ", condition " + fmt(w.condition_number);
  return r;
}

Outcome cmd_rat_parse(const Options& o) {
  Outcome r;
  if (o.expr.empty()) throw Error(ErrorCode::InvalidInput, "--expr TEXT is required");
  const int d = o.d > 0 ? o.d : 64;
  r.inputs["expr"] = o.expr;
  r.inputs["d"] = d;
  const ExprPtr e = parse_expr(o.expr, d);
  r.results["canonical"] = to_string(e);
  r.results["tree"] = to_tree_string(e);
  r.results["max_variable"] = max_variable(e);
  r.summary = to_tree_string(e);
  return r;
}

void maybe_save(const Options& o, const DescriptorRealization& R, Outcome& r) {
  if (o.save.empty()) return;
  io::save_realization(R, o.save);
  r.results["saved"] = o.save;
}

Outcome cmd_rat_realize(const Options& o) {
  Outcome r;
  if (o.expr.empty()) throw Error(ErrorCode::InvalidInput, "--expr TEXT is required");
  DescriptorRealization R = need_realization(o, r.inputs);
  r.inputs["minimize"] = o.minimize;
  if (o.minimize) R = minimize_realization(R);
  r.results["realization"] = io::to_json(R);
  maybe_save(o, R, r);
  r.summary = "state_dim " + std::to_string(R.state_dim());
  return r;
}

Outcome cmd_rat_minimize(const Options& o) {
  Outcome r;
  const DescriptorRealization R = need_realization(o, r.inputs);
  const DescriptorRealization M = minimize_realization(R);
  r.results["state_dim_before"] = R.state_dim();
  r.results["state_dim"] = M.state_dim();
  r.results["realization"] = io::to_json(M);
  maybe_save(o, M, r);
  r.summary = "state_dim " + std::to_string(R.state_dim()) + " -> " + std::to_string(M.state_dim());
  return r;
}

MatTuple need_point(const Options& o, int d, Json& inputs) {
  if (o.point.empty()) throw Error(ErrorCode::InvalidInput, "--point FILE is required");
  MatTuple X = io::load_point(o.point);
  if (X.d() != d)
    throw Error(ErrorCode::Dimension, "point has d=" + std::to_string(X.d()) + " but the function has d=" + std::to_string(d));
  inputs["point"] = io::to_json(X);
  return X;
}

Outcome cmd_rat_eval(const Options& o) {
  Outcome r;
  const DescriptorRealization R = need_realization(o, r.inputs);
  const MatTuple X = need_point(o, R.d(), r.inputs);
  try {
    const CMatrix v = eval_descriptor(R, X);
    r.results["inside_domain"] = true;
    r.results["value"] = io::to_json(v);
    r.summary = X.n() == 1 ? "value " + fmt(v(0, 0).real()) + (v(0, 0).imag() < 0 ? " - " : " + ") +
                                 fmt(std::abs(v(0, 0).imag())) + "i"
                           : "value computed (" + std::to_string(X.n()) + "x" + std::to_string(X.n()) + ")";
  } catch (const OutsideDomainError& e) {
    r.results["inside_domain"] = false;
    r.results["sigma_min"] = e.sigma_min();
    r.summary = "outside domain (sigma_min " + fmt(e.sigma_min()) + ")";
  }
  r.results["status"] = r.results["inside_domain"].get<bool>() ? "inside domain" : "outside domain";
  return r;
}

Outcome cmd_rat_domain(const Options& o) {
  Outcome r;
  const DescriptorRealization R = need_realization(o, r.inputs);
  const MatTuple X = need_point(o, R.d(), r.inputs);
  const double smin = domain_sigma_min(R, X);
  const bool inside = domain_contains(R, X);
  r.results["inside_domain"] = inside;
  r.results["sigma_min"] = smin;
  r.results["status"] = inside ? "inside domain" : "outside domain";
  r.summary = std::string(inside ? "inside domain" : "outside domain") + " (sigma_min " + fmt(smin) + ")";
  return r;
}

Outcome cmd_rat_ball(const Options& o) {
  Outcome r;
  const DescriptorRealization R = need_realization(o, r.inputs);
  const OpSpaceSpec spec = load_space(o.space, R.d(), r.inputs);
  r.inputs["nmax"] = o.nmax;
  const DomainBallCertificate c = domain_ball_certificate(R, spec, radius_options(o));
  auto radius = [](double v) { return std::isfinite(v) ? Json(v) : Json("inf"); };
  r.results["inclusion_radius"] = radius(c.inclusion_radius);
  r.results["exclusion_radius"] = radius(c.exclusion_radius);
  r.results["unbounded"] = c.unbounded;
  r.results["dual_space"] = io::to_json(c.dual_space);
  r.results["dual_radius"] = io::to_json(c.dual_radius);
  r.summary = c.unbounded ? "domain is everything"
                          : "ball of radius " + fmt(c.inclusion_radius) + " inside, radius " +
                                fmt(c.exclusion_radius) + " excluded";
  return r;
}

Outcome cmd_demo_famous(const Options& o) {
  Outcome r;
  const int n = o.demo_n;
  if (n < 2 || n > 20) throw Error(ErrorCode::Config, "--n must lie in 2..20");
  r.inputs["n"] = n;
  const FamousExample ex = build_famous();
  const MatTuple& A = ex.descriptor.A;
  Json checks = Json::array();
  bool all = true;
  auto check = [&](const std::string& name, bool pass, Json detail) {
    all = all && pass;
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
  };

  const double wpc = word_power_check(n);
  check("word_products", wpc <= 1e-12, {{"max_defect", wpc}, {"n", n}});

  double sum_dev = 0.0;
  for (int k = 2; k <= n; ++k) sum_dev = std::max(sum_dev, std::abs(word_sum_norm(k) - 1.0));
  check("word_sum_norm_is_one", sum_dev <= 1e-10, {{"max_deviation", sum_dev}, {"n_max", n}});

  const RadiusEstimate rs = rho_rs_bounds(A, 12);
  check("rota_strang_radius", std::abs(rs.lower - 0.5) <= 1e-9 && rs.upper <= 0.531, io::to_json(rs));

  NormOptions no;
  no.seed = o.seed;
  const RadiusEstimate diamond = diamond_radius_bounds(n, no);
  check("diamond_radius", diamond.lower >= 1.0 - 1e-9 && diamond.upper <= std::pow(2.0, 1.0 / n) + 1e-9,
        io::to_json(diamond));

  RadiusOptions ro = radius_options(o);
  ro.witness = false;
  const RadiusEstimate poly = polydisc_radius_value(ro);
  check("polydisc_radius", std::abs(poly.lower - 0.5) <= 1e-9 && poly.width() <= 1e-6, io::to_json(poly));

  const DecompositionResult hj = holder_jordan(A, o.seed);
  Json comps = Json::array();
  for (const MatTuple& c : hj.components) {
    Json one = Json::array();
    for (int j = 0; j < c.d(); ++j) one.push_back(io::to_json(c[j](0, 0)));
    comps.push_back(c.n() == 1 ? one : Json(c.n()));
  }
  check("holder_jordan_components", hj.components.size() == 3, comps);

  const ColligationCheck col = fm_colligation_check(ex.fm);
  check("fm_colligation_unitary", col.unitary, {{"defect", col.defect}});

  const LemmaCheckResult lemma = lemma_T_check(std::min(n, 8), 200, {3, o.seed});
  check("lemma_T_bounds", lemma.max_violation <= 1e-9,
        {{"max_violation", lemma.max_violation}, {"max_norm", lemma.max_norm}, {"trials", lemma.trials},
         {"rejected", lemma.rejected}});

  const DescriptorRealization parsed = minimize_realization(realize(parse_expr(FamousExample::kFormula, 2), 2));
  const MatTuple p = MatTuple::scalars({Complex(0.3, 0.2), Complex(-0.4, 0.1)});
  const double diff = std::abs(eval_descriptor(parsed, p)(0, 0) - famous_scalar_value(p[0](0, 0), p[1](0, 0)));
  check("formula_realization", parsed.state_dim() == 3 && diff <= 1e-9,
        {{"state_dim", parsed.state_dim()}, {"value_error", diff}});

  const DomainBallCertificate cert = domain_ball_certificate(ex.descriptor, OpSpaceSpec::max_l1(2), ro);
  check("domain_ball_maxl1",
        cert.inclusion_radius >= 1.8 && std::abs(cert.exclusion_radius - 2.0) <= 1e-6,
        {{"inclusion_radius", cert.inclusion_radius}, {"exclusion_radius", cert.exclusion_radius}});

  const double smin = domain_sigma_min(ex.descriptor, MatTuple::scalars({1.0, 1.0}));
  check("singular_at_one_one", smin <= 1e-12, {{"sigma_min", smin}});

  r.results["checks"] = std::move(checks);
  r.results["all_pass"] = all;
  r.summary = all ? "all checks pass" : "some checks failed";
  if (!all) r.code = kExitError;
  return r;
}

std::string render_text(const Json& report, const std::string& summary) {
  std::ostringstream os;
  os << report["command"].get<std::string>() << ": " << summary << "\n";
  os << "seed " << report["seed"].get<std::uint64_t>() << ", digest " << report["inputs_digest"].get<std::string>()
     << "\n";
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint spectral radii, similarity to operator balls and nc rational functions", "ncball"};
  app.require_subcommand(1);
  Options o;
  std::string command;
  std::function<Outcome(const Options&)> action;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed (default 0)");
    sub->add_option("--out", o.out, "Write the report to FILE instead of stdout");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  };
  auto bind = [&](CLI::App* sub, std::string name, std::function<Outcome(const Options&)> fn) {
    sub->callback([&, name, fn] {
      command = name;
      action = fn;
    });
  };
  const std::string space_help = "row | column | minlinf | maxl1 | pencil:FILE";

  auto* norm = app.add_subcommand("norm", "Norm of a tuple in an operator space");
  norm->add_option("--space", o.space, space_help);
  norm->add_option("--tuple", o.tuple, "Tuple JSON file")->required();
  common(norm);
  bind(norm, "norm", cmd_norm);

  auto* radius = app.add_subcommand("radius", "Joint spectral radius bounds");
  radius->add_option("--space", o.space, space_help);
  radius->add_option("--tuple", o.tuple, "Tuple JSON file")->required();
  radius->add_option("--nmax", o.nmax, "Order of the word-sum diagnostics")->check(CLI::Range(1, 16));
  radius->add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::Range(1, 1000));
  common(radius);
  bind(radius, "radius", cmd_radius);

  auto* decide = app.add_subcommand("decide", "Decide similarity to the open unit ball");
  decide->add_option("--space", o.space, space_help);
  decide->add_option("--tuple", o.tuple, "Tuple JSON file")->required();
  decide->add_option("--witness", o.witness_out, "Write the similarity witness here on Yes");
  decide->add_option("--nmax", o.nmax, "Order of the word-sum diagnostics")->check(CLI::Range(1, 16));
  decide->add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::Range(1, 1000));
  common(decide);
  bind(decide, "decide", cmd_decide);

  auto* sim = app.add_subcommand("similarity", "Minimize the norm over similarities");
  sim->add_option("--space", o.space, space_help);
  sim->add_option("--tuple", o.tuple, "Tuple JSON file")->required();
  sim->add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::Range(1, 1000));
  common(sim);
  bind(sim, "similarity", cmd_similarity);

  auto* rat = app.add_subcommand("rat", "Noncommutative rational functions");
  rat->require_subcommand(1);
  auto rat_sub = [&](const std::string& name, const std::string& help, std::function<Outcome(const Options&)> fn) {
    auto* s = rat->add_subcommand(name, help);
    common(s);
    bind(s, "rat " + name, fn);
    return s;
  };
  auto* parse = rat_sub("parse", "Parse an expression", cmd_rat_parse);
  parse->add_option("--expr", o.expr, "Expression text")->required();
  parse->add_option("--d", o.d, "Number of variables")->check(CLI::Range(1, 1 << 20));

  auto* realize_cmd = rat_sub("realize", "Descriptor realization of an expression", cmd_rat_realize);
  realize_cmd->add_option("--expr", o.expr, "Expression text")->required();
  realize_cmd->add_option("--d", o.d, "Number of variables")->required()->check(CLI::Range(1, 1 << 20));
  realize_cmd->add_flag("--minimize", o.minimize, "Minimize the realization");
  realize_cmd->add_option("--save", o.save, "Write the realization JSON here");

  auto* minimize = rat_sub("minimize", "Minimize a realization", cmd_rat_minimize);
  minimize->add_option("--real", o.real, "Realization JSON file")->required();
  minimize->add_option("--save", o.save, "Write the realization JSON here");

  for (auto [name, help, fn] : {std::tuple{"eval", "Evaluate at a point", cmd_rat_eval},
                                std::tuple{"domain", "Domain membership of a point", cmd_rat_domain}}) {
    auto* s = rat_sub(name, help, fn);
    auto* real = s->add_option("--real", o.real, "Realization JSON file");
    auto* ex = s->add_option("--expr", o.expr, "Expression text");
    real->excludes(ex);
    s->add_option("--d", o.d, "Number of variables (with --expr)")->check(CLI::Range(1, 1 << 20));
    s->add_option("--point", o.point, "Tuple JSON file, or an array of scalars")->required();
  }

  auto* ball = rat_sub("ball", "Certified balls inside the domain", cmd_rat_ball);
  ball->add_option("--real", o.real, "Realization JSON file")->required();
  ball->add_option("--space", o.space, space_help);
  ball->add_option("--nmax", o.nmax, "Order of the word-sum diagnostics")->check(CLI::Range(1, 16));

  auto* demo = app.add_subcommand("demo", "Worked examples");
  demo->require_subcommand(1);
  auto* famous = demo->add_subcommand("famous", "Verify the two-variable bidisc example");
  famous->add_option("--n", o.demo_n, "Word length")->check(CLI::Range(2, 20));
  common(famous);
  bind(famous, "demo famous", cmd_demo_famous);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome res = action(o);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    res.inputs["command"] = command;
    res.inputs["seed"] = o.seed;
    Json report;
    report["command"] = command;
    report["inputs_digest"] = io::fnv1a_hex(res.inputs.dump());
    report["seed"] = o.seed;
    report["summary"] = res.summary;
    report["results"] = std::move(res.results);
    report["timings"] = {{"total_ms", ms}};
    const std::string text = o.format == "text" ? render_text(report, res.summary) : io::dump(report);
    if (o.out.empty()) {
      out << text;
    } else {
      io::write_text_file(o.out, text);
    }
    if (res.code == kExitError) err << "error: " << res.summary << "\n";
    return res.code;
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace ncball::cli
