// ripkit: construct, certify, audit, and use RIP-p measurement matrices.
//
// Exit codes: 0 success / check passed, 1 a check failed (the JSON report
// is still written), 2 usage or input error. Machine-readable JSON goes to
// stdout, human logs and the run manifest to stderr.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ripkit/audit.hpp"
#include "ripkit/expander.hpp"
#include "ripkit/incoherence.hpp"
#include "ripkit/manifest.hpp"
#include "ripkit/matrix.hpp"
#include "ripkit/parallel.hpp"
#include "ripkit/phase.hpp"
#include "ripkit/plan.hpp"
#include "ripkit/recover.hpp"
#include "ripkit/ripcheck.hpp"
#include "ripkit/serialize.hpp"
#include "ripkit/tails.hpp"
#include "ripkit/version.hpp"

namespace {

using namespace ripkit;

struct RunContext {
  RunManifest manifest;
  std::string manifest_path;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void note_input(const std::string& path) {
    manifest.input_digests[path] = digest_file_hex(path);
  }
  void note_output(const std::string& path) {
    manifest.output_digests[path] = digest_file_hex(path);
  }
  void arg(const std::string& key, const std::string& value) {
    manifest.args[key] = value;
  }

  void finish() {
    manifest.tool_version = kVersion;
    manifest.wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    const auto text = manifest.to_json();
    std::cerr << text << "\n";
    if (!manifest_path.empty()) {
      std::ofstream os(manifest_path);
      os << text << "\n";
    }
  }
};

int emit(RunContext& ctx, const std::string& report, bool pass,
         const std::string& out_path = "") {
  std::cout << report << "\n";
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    os << report << "\n";
    ctx.note_output(out_path);
  }
  ctx.finish();
  return pass ? 0 : 1;
}

SparseBinaryMatrix load_binary_matrix(RunContext& ctx, const std::string& path) {
  ctx.note_input(path);
  return load_matrix(path);
}

SparseMatrix load_any_matrix(RunContext& ctx, const std::string& path) {
  ctx.note_input(path);
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    return load_matrix_csv(path);
  }
  return SparseMatrix::from_binary(load_matrix(path));
}

std::vector<std::uint32_t> parse_u32_list(const std::string& csv) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const auto comma = csv.find(',', pos);
    const auto tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                : comma - pos);
    if (!tok.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIP-p measurement matrix toolkit"};
  app.require_subcommand(1);

  RunContext ctx;
  int exit_code = 0;

  app.add_option_function<unsigned>(
         "--threads", [](unsigned n) { set_max_threads(n); },
         "Worker thread cap (env RIPKIT_THREADS; 0 = all cores)")
      ->trigger_on_parse();
  app.add_option("--manifest", ctx.manifest_path,
                 "Write the run manifest here");

  // ---- plan ----
  auto* plan_cmd = app.add_subcommand("plan", "Plan (m, d, l, delta) from (n, k, p, eps)");
  struct {
    std::uint32_t n = 0, k = 0;
    double p = 2.0, eps = 0.25, tau = 0.0;
    PlanConstants constants;
    bool unit_constants = false;
    std::string out;
  } plan_args;
  plan_cmd->add_option("--n", plan_args.n, "Columns")->required();
  plan_cmd->add_option("--k", plan_args.k, "Sparsity")->required();
  plan_cmd->add_option("--p", plan_args.p, "Norm exponent")->required();
  plan_cmd->add_option("--eps", plan_args.eps, "Distortion target in (0, 1/2)");
  plan_cmd->add_option("--tau", plan_args.tau,
                       "Distance of p from {1,2} (p<2 regime; default derived)");
  plan_cmd->add_flag("--unit-constants", plan_args.unit_constants,
                     "Use unit leading constants instead of the calibrated defaults");
  plan_cmd->add_option("--cm", plan_args.constants.c_m_ge2, "C_m (p>=2)");
  plan_cmd->add_option("--cd", plan_args.constants.c_d_ge2, "C_d (p>=2)");
  plan_cmd->add_option("--cl", plan_args.constants.c_ell, "C_l (p<2)");
  plan_cmd->add_option("--cdelta", plan_args.constants.c_delta, "C_delta (p<2)");
  plan_cmd->add_option("--cd2", plan_args.constants.c_d_lt2, "C_d (p<2)");
  plan_cmd->add_option("--cm2", plan_args.constants.c_m_lt2, "C_m (p<2)");
  plan_cmd->add_option("-o,--out", plan_args.out, "Also write the plan here");
  plan_cmd->callback([&] {
    ctx.manifest.command = "plan";
    const auto c = plan_args.unit_constants ? PlanConstants::unit()
                                            : plan_args.constants;
    ParamPlan plan;
    if (plan_args.p >= 2.0) {
      plan = plan_params_p_ge2(plan_args.n, plan_args.k, plan_args.p,
                               plan_args.eps, c);
    } else {
      double tau = plan_args.tau;
      if (tau <= 0.0) tau = std::min(plan_args.p - 1.0, 2.0 - plan_args.p);
      plan = plan_params_p_lt2(plan_args.n, plan_args.k, plan_args.p,
                               plan_args.eps, tau, c);
    }
    const auto text = plan_to_json(plan);
    if (!plan_args.out.empty()) save_plan(plan, plan_args.out);
    exit_code = emit(ctx, text, true, "");
  });

  // ---- generate ----
  auto* gen_cmd = app.add_subcommand("generate", "Generate a sparse binary matrix");
  struct {
    std::string plan_path, out, csv;
    std::uint32_t n = 0, m = 0, d = 0;
    double p = 2.0;
    std::uint64_t seed = 0;
  } gen_args;
  gen_cmd->add_option("--plan", gen_args.plan_path, "Plan JSON (or give --n/--m/--d/--p)");
  gen_cmd->add_option("--n", gen_args.n, "Columns");
  gen_cmd->add_option("--m", gen_args.m, "Rows");
  gen_cmd->add_option("--d", gen_args.d, "Per-column support size");
  gen_cmd->add_option("--p", gen_args.p, "Norm exponent");
  gen_cmd->add_option("--seed", gen_args.seed, "Seed")->required();
  gen_cmd->add_option("-o,--out", gen_args.out, "Matrix JSON path")->required();
  gen_cmd->add_option("--csv", gen_args.csv, "Also export (row,col,value) CSV");
  gen_cmd->callback([&] {
    ctx.manifest.command = "generate";
    ctx.manifest.seed = gen_args.seed;
    std::uint32_t n = gen_args.n, m = gen_args.m, d = gen_args.d;
    double p = gen_args.p;
    if (!gen_args.plan_path.empty()) {
      ctx.note_input(gen_args.plan_path);
      const auto plan = load_plan(gen_args.plan_path);
      if (n == 0) n = plan.n;
      m = plan.m;
      d = plan.d;
      p = plan.p;
    }
    const auto a = gen_matrix(n, m, d, p, gen_args.seed);
    save_matrix(a, gen_args.out);
    ctx.note_output(gen_args.out);
    if (!gen_args.csv.empty()) {
      save_matrix_csv(a, gen_args.csv);
      ctx.note_output(gen_args.csv);
    }
    std::cout << "{\"version\":" << kSchemaVersion
              << ",\"kind\":\"generate\",\"n\":" << n << ",\"m\":" << m
              << ",\"d\":" << d << ",\"p\":" << p
              << ",\"seed\":" << gen_args.seed << "}\n";
    ctx.finish();
    exit_code = 0;
  });

  // ---- incoherence ----
  auto* inc_cmd = app.add_subcommand("incoherence", "Pairwise support-overlap check");
  struct {
    std::string matrix, out;
    std::uint32_t k = 0;
    double eps = 0.25;
  } inc_args;
  inc_cmd->add_option("--matrix", inc_args.matrix)->required();
  inc_cmd->add_option("--k", inc_args.k)->required();
  inc_cmd->add_option("--eps", inc_args.eps);
  inc_cmd->add_option("-o,--out", inc_args.out);
  inc_cmd->callback([&] {
    ctx.manifest.command = "incoherence";
    const auto a = load_binary_matrix(ctx, inc_args.matrix);
    const auto rep = check_incoherence(a, inc_args.k, inc_args.eps);
    exit_code = emit(ctx, report_json(rep), rep.pass, inc_args.out);
  });

  // ---- expander verify / falsify ----
  auto* exp_cmd = app.add_subcommand("expander", "Bipartite expansion tools");
  exp_cmd->require_subcommand(1);
  auto* exp_verify = exp_cmd->add_subcommand("verify", "Exhaustive certification");
  struct {
    std::string matrix, columns, out;
    std::uint32_t ell = 1;
    double delta = 0.1;
    std::uint64_t budget = 10'000'000;
  } expv_args;
  exp_verify->add_option("--matrix", expv_args.matrix)->required();
  exp_verify->add_option("--ell", expv_args.ell)->required();
  exp_verify->add_option("--delta", expv_args.delta)->required();
  exp_verify->add_option("--budget", expv_args.budget, "Subset enumeration cap");
  exp_verify->add_option("--columns", expv_args.columns,
                         "Comma-separated column subset to restrict to");
  exp_verify->add_option("-o,--out", expv_args.out);
  exp_verify->callback([&] {
    ctx.manifest.command = "expander verify";
    const auto a = load_binary_matrix(ctx, expv_args.matrix);
    ExpanderOpts opts;
    opts.budget = expv_args.budget;
    if (!expv_args.columns.empty()) opts.columns = parse_u32_list(expv_args.columns);
    const auto rep = verify_expander_exact(a, expv_args.ell, expv_args.delta, opts);
    exit_code = emit(ctx, report_json(rep), rep.pass, expv_args.out);
  });
  auto* exp_falsify = exp_cmd->add_subcommand("falsify", "Heuristic witness search");
  struct {
    std::string matrix, out;
    std::uint32_t ell = 1;
    double delta = 0.1;
    std::uint64_t budget = 100000, seed = 0;
  } expf_args;
  exp_falsify->add_option("--matrix", expf_args.matrix)->required();
  exp_falsify->add_option("--ell", expf_args.ell)->required();
  exp_falsify->add_option("--delta", expf_args.delta)->required();
  exp_falsify->add_option("--budget", expf_args.budget);
  exp_falsify->add_option("--seed", expf_args.seed);
  exp_falsify->add_option("-o,--out", expf_args.out);
  exp_falsify->callback([&] {
    ctx.manifest.command = "expander falsify";
    ctx.manifest.seed = expf_args.seed;
    const auto a = load_binary_matrix(ctx, expf_args.matrix);
    const auto witness = falsify_expander_heuristic(
        a, expf_args.ell, expf_args.delta, expf_args.budget, expf_args.seed);
    std::string text;
    if (witness) {
      text = "{\"version\":1,\"kind\":\"falsify\",\"witness\":[";
      for (std::size_t i = 0; i < witness->size(); ++i) {
        text += std::to_string((*witness)[i]);
        if (i + 1 < witness->size()) text += ",";
      }
      text += "]}";
    } else {
      text = "{\"version\":1,\"kind\":\"falsify\",\"witness\":null}";
    }
    // A found witness means the expansion claim FAILS (exit 1).
    exit_code = emit(ctx, text, !witness.has_value(), expf_args.out);
  });

  // ---- rip check ----
  auto* rip_cmd = app.add_subcommand("rip", "RIP-p distortion estimation");
  rip_cmd->require_subcommand(1);
  auto* rip_check = rip_cmd->add_subcommand("check", "Sampled-support estimate");
  struct {
    std::string matrix, out;
    std::uint32_t k = 0, supports = 100, restarts = 200, iters = 100;
    double p = 2.0;
    std::uint64_t seed = 0;
  } ripc_args;
  rip_check->add_option("--matrix", ripc_args.matrix)->required();
  rip_check->add_option("--k", ripc_args.k)->required();
  rip_check->add_option("--p", ripc_args.p)->required();
  rip_check->add_option("--supports", ripc_args.supports);
  rip_check->add_option("--restarts", ripc_args.restarts);
  rip_check->add_option("--iters", ripc_args.iters);
  rip_check->add_option("--seed", ripc_args.seed);
  rip_check->add_option("-o,--out", ripc_args.out);
  rip_check->callback([&] {
    ctx.manifest.command = "rip check";
    ctx.manifest.seed = ripc_args.seed;
    const auto s = load_any_matrix(ctx, ripc_args.matrix);
    RipOpts opts;
    opts.restarts = ripc_args.restarts;
    opts.iters = ripc_args.iters;
    const auto rep = rip_sampled(s, ripc_args.k, ripc_args.p,
                                 ripc_args.supports, opts, ripc_args.seed);
    exit_code = emit(ctx, report_json(rep), true, ripc_args.out);
  });

  // ---- tails ----
  auto* tails_cmd = app.add_subcommand("tails", "Monte-Carlo tail/moment validators");
  tails_cmd->require_subcommand(1);
  std::string tails_config;
  tails_cmd->add_option("--config", tails_config,
                        "Calibration JSON (moment_C, tail_c_exp, tail_C_hyp)");
  auto calibration = [&]() {
    return tails_config.empty() ? TailsCalibration{}
                                : load_calibration(tails_config);
  };

  auto* t_loads = tails_cmd->add_subcommand("loads", "Row-load sampler summary");
  struct {
    std::uint32_t m = 0, d = 0, k = 0;
    double p = 2.0;
    std::uint64_t seed = 0, trials = 100000;
    std::string out;
  } tl_args;
  t_loads->add_option("--m", tl_args.m)->required();
  t_loads->add_option("--d", tl_args.d)->required();
  t_loads->add_option("--k", tl_args.k)->required();
  t_loads->add_option("--p", tl_args.p)->required();
  t_loads->add_option("--seed", tl_args.seed);
  t_loads->add_option("--trials", tl_args.trials);
  t_loads->add_option("-o,--out", tl_args.out);
  t_loads->callback([&] {
    ctx.manifest.command = "tails loads";
    ctx.manifest.seed = tl_args.seed;
    const auto sums = sample_row_loads(tl_args.m, tl_args.d, tl_args.k,
                                       tl_args.p, tl_args.seed, tl_args.trials);
    const auto stats = summarize(sums);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"version\":1,\"kind\":\"row_loads\",\"trials\":%llu,"
                  "\"mean\":%.17g,\"variance\":%.17g,\"std_error\":%.17g}",
                  static_cast<unsigned long long>(stats.n), stats.mean,
                  stats.variance, stats.std_error);
    exit_code = emit(ctx, buf, true, tl_args.out);
  });

  auto* t_moment = tails_cmd->add_subcommand("moment", "Single-moment bound check");
  struct {
    std::uint32_t k = 0;
    double delta = 0.01, p = 2.0, ell = 1.0, C = -1.0;
    std::uint64_t trials = 100000, seed = 0;
    std::string out;
  } tm_args;
  t_moment->add_option("--k", tm_args.k)->required();
  t_moment->add_option("--delta", tm_args.delta)->required();
  t_moment->add_option("--p", tm_args.p)->required();
  t_moment->add_option("--ell", tm_args.ell)->required();
  t_moment->add_option("--C", tm_args.C, "Bound constant (default from config)");
  t_moment->add_option("--trials", tm_args.trials);
  t_moment->add_option("--seed", tm_args.seed);
  t_moment->add_option("-o,--out", tm_args.out);
  t_moment->callback([&] {
    ctx.manifest.command = "tails moment";
    ctx.manifest.seed = tm_args.seed;
    const double C = tm_args.C > 0 ? tm_args.C : calibration().moment_C;
    const auto row = check_single_moment_bound(
        tm_args.k, tm_args.delta, tm_args.p, tm_args.ell, tm_args.trials, C,
        tm_args.seed);
    exit_code = emit(ctx, report_json(row), row.pass, tm_args.out);
  });

  auto* t_na = tails_cmd->add_subcommand("na", "Negative-association moment check");
  struct {
    std::uint32_t m = 0, d = 0, k = 0, t = 1;
    double p = 2.0;
    std::uint64_t trials = 100000, seed = 0;
    std::string out;
  } tn_args;
  t_na->add_option("--m", tn_args.m)->required();
  t_na->add_option("--d", tn_args.d)->required();
  t_na->add_option("--k", tn_args.k)->required();
  t_na->add_option("--p", tn_args.p)->required();
  t_na->add_option("--t", tn_args.t)->required();
  t_na->add_option("--trials", tn_args.trials);
  t_na->add_option("--seed", tn_args.seed);
  t_na->add_option("-o,--out", tn_args.out);
  t_na->callback([&] {
    ctx.manifest.command = "tails na";
    ctx.manifest.seed = tn_args.seed;
    const auto rep = check_negative_association(
        tn_args.m, tn_args.d, tn_args.k, tn_args.p, tn_args.t, tn_args.trials,
        tn_args.seed);
    exit_code = emit(ctx, report_json(rep), rep.pass, tn_args.out);
  });

  auto* t_latala = tails_cmd->add_subcommand("latala", "Moment-bound infimum");
  struct {
    double constant = -1.0, delta = 0.05, p = 2.5;
    std::uint32_t k = 0, d = 1, t = 1;
    std::string out;
  } tlat_args;
  t_latala->add_option("--const", tlat_args.constant, "Constant-Y family value");
  t_latala->add_option("--k", tlat_args.k, "Binomial-load family k");
  t_latala->add_option("--delta", tlat_args.delta);
  t_latala->add_option("--p", tlat_args.p);
  t_latala->add_option("--d", tlat_args.d)->required();
  t_latala->add_option("--t", tlat_args.t)->required();
  t_latala->add_option("-o,--out", tlat_args.out);
  t_latala->callback([&] {
    ctx.manifest.command = "tails latala";
    DiscreteDist dist;
    if (tlat_args.constant >= 0.0) {
      dist = constant_dist(tlat_args.constant);
    } else if (tlat_args.k > 0) {
      dist = binomial_load_dist(tlat_args.k, tlat_args.delta, tlat_args.p);
    } else {
      throw CLI::ValidationError("latala", "give --const or --k");
    }
    const auto res = latala_bound(dist, tlat_args.d, tlat_args.t);
    exit_code = emit(ctx, report_json(res), res.ok, tlat_args.out);
  });

  auto* t_tail = tails_cmd->add_subcommand("tail", "Row-load tail probability check");
  struct {
    std::uint32_t m = 0, d = 0, k = 0;
    double p = 2.0, eps = 0.25;
    std::uint64_t trials = 100000, seed = 0;
    std::string out;
  } tt_args;
  t_tail->add_option("--m", tt_args.m)->required();
  t_tail->add_option("--d", tt_args.d)->required();
  t_tail->add_option("--k", tt_args.k)->required();
  t_tail->add_option("--p", tt_args.p)->required();
  t_tail->add_option("--eps", tt_args.eps)->required();
  t_tail->add_option("--trials", tt_args.trials);
  t_tail->add_option("--seed", tt_args.seed);
  t_tail->add_option("-o,--out", tt_args.out);
  t_tail->callback([&] {
    ctx.manifest.command = "tails tail";
    ctx.manifest.seed = tt_args.seed;
    const auto rep = tail_probability_check(tt_args.m, tt_args.d, tt_args.k,
                                            tt_args.p, tt_args.eps,
                                            tt_args.trials, tt_args.seed,
                                            calibration());
    exit_code = emit(ctx, report_json(rep), rep.pass, tt_args.out);
  });

  // ---- audit ----
  auto* audit_cmd = app.add_subcommand("audit", "Lower-bound and inequality audits");
  audit_cmd->require_subcommand(1);

  struct {
    std::string matrix, out;
    double p = 2.0, D = 1.5;
    std::uint32_t k = 1;
  } am_args;
  auto add_matrix_audit = [&](const char* name, const char* desc, auto runner,
                              bool needs_k) {
    auto* cmd = audit_cmd->add_subcommand(name, desc);
    cmd->add_option("--matrix", am_args.matrix)->required();
    cmd->add_option("--p", am_args.p)->required();
    cmd->add_option("--D", am_args.D)->required();
    if (needs_k) cmd->add_option("--k", am_args.k)->required();
    cmd->add_option("-o,--out", am_args.out);
    cmd->callback([&ctx, &exit_code, &am_args, runner, name] {
      ctx.manifest.command = std::string("audit ") + name;
      const auto s = load_any_matrix(ctx, am_args.matrix);
      exit_code = runner(s);
    });
  };
  add_matrix_audit("columns", "Column p-norm bounds", [&](const SparseMatrix& s) {
    const auto audit = audit_column_pnorms(s, am_args.p, am_args.D);
    return emit(ctx, report_json(audit), audit.pass, am_args.out);
  }, false);
  add_matrix_audit("rows", "Row order-statistic bounds", [&](const SparseMatrix& s) {
    const auto audit = audit_row_order_stats(s, am_args.p, am_args.D, am_args.k);
    return emit(ctx, report_json(audit), audit.pass, am_args.out);
  }, true);
  add_matrix_audit("frobenius", "Squared-entry sum bounds", [&](const SparseMatrix& s) {
    const auto audit = audit_frobenius(s, am_args.p, am_args.D, am_args.k);
    return emit(ctx, report_json(audit), audit.pass, am_args.out);
  }, true);

  auto* a_dim = audit_cmd->add_subcommand("dimension", "Dimension lower bound");
  struct {
    std::uint32_t n = 0, k = 0;
    double p = 2.5, D = 1.5, c1 = 1.0, c2 = 1.0;
    std::string out;
  } ad_args;
  a_dim->add_option("--n", ad_args.n)->required();
  a_dim->add_option("--k", ad_args.k)->required();
  a_dim->add_option("--p", ad_args.p)->required();
  a_dim->add_option("--D", ad_args.D)->required();
  a_dim->add_option("--c1", ad_args.c1);
  a_dim->add_option("--c2", ad_args.c2);
  a_dim->add_option("-o,--out", ad_args.out);
  a_dim->callback([&] {
    ctx.manifest.command = "audit dimension";
    const auto bound = dimension_bound(ad_args.n, ad_args.k, ad_args.p,
                                       ad_args.D, {ad_args.c1, ad_args.c2});
    exit_code = emit(ctx, report_json(bound), true, ad_args.out);
  });

  auto* a_sparse = audit_cmd->add_subcommand("sparsity", "Column sparsity lower bound");
  struct {
    std::string matrix, out;
    std::uint32_t k = 0;
    double p = 2.0, D = 1.5;
  } as_args;
  a_sparse->add_option("--k", as_args.k)->required();
  a_sparse->add_option("--p", as_args.p)->required();
  a_sparse->add_option("--D", as_args.D)->required();
  a_sparse->add_option("--matrix", as_args.matrix, "If given, run the companion check");
  a_sparse->add_option("-o,--out", as_args.out);
  a_sparse->callback([&] {
    ctx.manifest.command = "audit sparsity";
    if (as_args.matrix.empty()) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "{\"version\":1,\"kind\":\"sparsity_bound\",\"d_min\":%.17g}",
                    sparsity_bound(as_args.k, as_args.p, as_args.D));
      exit_code = emit(ctx, buf, true, as_args.out);
    } else {
      const auto s = load_any_matrix(ctx, as_args.matrix);
      const auto audit = check_sparsity_bound(s, as_args.k, as_args.p, as_args.D);
      exit_code = emit(ctx, report_json(audit), audit.pass, as_args.out);
    }
  });

  auto* a_scalar = audit_cmd->add_subcommand("scalar", "Scalar p-power inequality fuzz");
  struct {
    std::uint64_t samples = 1000000, seed = 0;
    double C = 3.0;
    std::string out;
  } asc_args;
  a_scalar->add_option("--samples", asc_args.samples);
  a_scalar->add_option("--seed", asc_args.seed);
  a_scalar->add_option("--C", asc_args.C);
  a_scalar->add_option("-o,--out", asc_args.out);
  a_scalar->callback([&] {
    ctx.manifest.command = "audit scalar";
    ctx.manifest.seed = asc_args.seed;
    const auto rep = scalar_inequality_test(asc_args.samples, asc_args.seed,
                                            asc_args.C);
    exit_code = emit(ctx, report_json(rep), rep.pass, asc_args.out);
  });

  auto* a_holder = audit_cmd->add_subcommand("holder", "Weighted power-sum inequality fuzz");
  struct {
    std::uint64_t samples = 100000, seed = 0;
    std::string out;
  } ah_args;
  a_holder->add_option("--samples", ah_args.samples);
  a_holder->add_option("--seed", ah_args.seed);
  a_holder->add_option("-o,--out", ah_args.out);
  a_holder->callback([&] {
    ctx.manifest.command = "audit holder";
    ctx.manifest.seed = ah_args.seed;
    const auto rep = holder_inequality_test(ah_args.samples, ah_args.seed);
    exit_code = emit(ctx, report_json(rep), rep.pass, ah_args.out);
  });

  auto* a_integral = audit_cmd->add_subcommand("integral", "Block prefix power sum");
  struct {
    std::uint32_t k = 0, ell = 1;
    double p = 1.5;
    std::string out;
  } ai_args;
  a_integral->add_option("--k", ai_args.k)->required();
  a_integral->add_option("--ell", ai_args.ell)->required();
  a_integral->add_option("--p", ai_args.p)->required();
  a_integral->add_option("-o,--out", ai_args.out);
  a_integral->callback([&] {
    ctx.manifest.command = "audit integral";
    const auto chk = integral_sum_check(ai_args.k, ai_args.ell, ai_args.p);
    exit_code = emit(ctx, report_json(chk), true, ai_args.out);
  });

  // ---- recover ----
  auto* rec_cmd = app.add_subcommand("recover", "l1-minimization sparse recovery");
  struct {
    std::string matrix, sketch, x_true, out;
    double p = 2.0, eps = 0.0, alpha = 0.0;
    std::uint32_t k = 0;
    int max_iter = 100000;
    double tol = 1e-8, rho = 1.0;
    std::uint64_t seed = 0;
  } rec_args;
  rec_cmd->add_option("--matrix", rec_args.matrix)->required();
  rec_cmd->add_option("--sketch", rec_args.sketch, "y as a JSON array")->required();
  rec_cmd->add_option("--p", rec_args.p)->required();
  rec_cmd->add_option("--eps", rec_args.eps)->required();
  rec_cmd->add_option("--k", rec_args.k, "Sparsity for the claim ledger");
  rec_cmd->add_option("--x-true", rec_args.x_true,
                      "True signal JSON; enables the claim ledger");
  rec_cmd->add_option("--alpha", rec_args.alpha, "Ledger block parameter");
  rec_cmd->add_option("--max-iter", rec_args.max_iter);
  rec_cmd->add_option("--tol", rec_args.tol);
  rec_cmd->add_option("--rho", rec_args.rho);
  rec_cmd->add_option("--seed", rec_args.seed);
  rec_cmd->add_option("-o,--out", rec_args.out);
  rec_cmd->callback([&] {
    ctx.manifest.command = "recover";
    ctx.manifest.seed = rec_args.seed;
    RecoveryProblem prob;
    prob.a = load_any_matrix(ctx, rec_args.matrix);
    ctx.note_input(rec_args.sketch);
    prob.y = vector_from_json_file(rec_args.sketch);
    prob.p = rec_args.p;
    prob.eps = rec_args.eps;
    prob.k = rec_args.k;
    SolveOpts opts;
    opts.max_iter = rec_args.max_iter;
    opts.tol = rec_args.tol;
    opts.rho = rec_args.rho;
    opts.seed = rec_args.seed;
    auto res = l1_minimize(prob, opts);
    if (!rec_args.x_true.empty() && rec_args.k > 0) {
      ctx.note_input(rec_args.x_true);
      const auto x = vector_from_json_file(rec_args.x_true);
      ClaimAuditOpts copts;
      copts.alpha = rec_args.alpha;
      res.claim_ledger = audit_recovery_claims(x, res.x_hat, prob.a, prob.y,
                                               prob.eps, rec_args.k, prob.p,
                                               copts);
    }
    bool pass = res.converged;
    for (const auto& rec : res.claim_ledger) {
      if (rec.applicable) pass = pass && rec.pass;
    }
    exit_code = emit(ctx, report_json(res), pass, rec_args.out);
  });

  // ---- rip-from-recovery ----
  auto* conv_cmd = app.add_subcommand("rip-from-recovery",
                                      "Converse: recovery implies RIP");
  struct {
    std::string matrix, out;
    std::uint32_t k = 0, trials = 100;
    double p = 2.0;
    std::uint64_t seed = 0;
    int max_iter = 20000;
  } conv_args;
  conv_cmd->add_option("--matrix", conv_args.matrix)->required();
  conv_cmd->add_option("--k", conv_args.k)->required();
  conv_cmd->add_option("--p", conv_args.p)->required();
  conv_cmd->add_option("--trials", conv_args.trials);
  conv_cmd->add_option("--seed", conv_args.seed);
  conv_cmd->add_option("--max-iter", conv_args.max_iter);
  conv_cmd->add_option("-o,--out", conv_args.out);
  conv_cmd->callback([&] {
    ctx.manifest.command = "rip-from-recovery";
    ctx.manifest.seed = conv_args.seed;
    const auto s = load_any_matrix(ctx, conv_args.matrix);
    const auto recover = [&](const std::vector<double>& y, double eps) {
      RecoveryProblem prob{s, y, conv_args.p, eps, conv_args.k};
      SolveOpts opts;
      opts.max_iter = conv_args.max_iter;
      return l1_minimize(prob, opts).x_hat;
    };
    const auto rep = rip_from_recovery(s, recover, conv_args.k, conv_args.p,
                                       conv_args.trials, conv_args.seed);
    exit_code = emit(ctx, report_json(rep), rep.finite, conv_args.out);
  });

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "Phase-transition experiments");
  bench_cmd->require_subcommand(1);
  auto* b_phase = bench_cmd->add_subcommand("phase", "m_star sweep over k");
  struct {
    std::uint32_t n = 0, trials = 2, supports = 16, m_lo = 8, m_hi = 1u << 20;
    double p = 2.0, eps = 0.25, threshold = 1.0, ratio = 1.3;
    std::string k_list = "2,3,4";
    std::uint64_t seed = 0;
    bool unit_d = true;
    std::string out;
  } bp_args;
  b_phase->add_option("--n", bp_args.n)->required();
  b_phase->add_option("--p", bp_args.p)->required();
  b_phase->add_option("--eps", bp_args.eps);
  b_phase->add_option("--k-list", bp_args.k_list, "Comma-separated k values");
  b_phase->add_option("--threshold", bp_args.threshold);
  b_phase->add_option("--trials", bp_args.trials);
  b_phase->add_option("--supports", bp_args.supports);
  b_phase->add_option("--m-lo", bp_args.m_lo);
  b_phase->add_option("--m-hi", bp_args.m_hi);
  b_phase->add_option("--grid-ratio", bp_args.ratio);
  b_phase->add_option("--seed", bp_args.seed);
  b_phase->add_option("-o,--out", bp_args.out, "CSV output path")->required();
  b_phase->callback([&] {
    ctx.manifest.command = "bench phase";
    ctx.manifest.seed = bp_args.seed;
    PhaseOpts opts;
    opts.m_lo = bp_args.m_lo;
    opts.m_hi = bp_args.m_hi;
    opts.grid_ratio = bp_args.ratio;
    opts.num_supports = bp_args.supports;
    const auto points = phase_transition(bp_args.n, bp_args.p, bp_args.eps,
                                         parse_u32_list(bp_args.k_list),
                                         bp_args.threshold, bp_args.trials,
                                         bp_args.seed, opts);
    save_phase_csv(points, bp_args.out);
    ctx.note_output(bp_args.out);
    bool all_ok = true;
    for (const auto& pt : points) all_ok = all_ok && pt.bracket_ok;
    std::ostringstream ss;
    write_phase_csv(points, ss);
    std::cout << ss.str();
    ctx.finish();
    exit_code = all_ok ? 0 : 1;
  });

  auto* b_fit = bench_cmd->add_subcommand("fit", "Log-log exponent fit");
  struct {
    std::string csv, out;
  } bf_args;
  b_fit->add_option("--csv", bf_args.csv)->required();
  b_fit->add_option("-o,--out", bf_args.out);
  b_fit->callback([&] {
    ctx.manifest.command = "bench fit";
    ctx.note_input(bf_args.csv);
    const auto points = load_phase_csv(bf_args.csv);
    const auto fit = fit_exponent(points);
    exit_code = emit(ctx, report_json(fit), true, bf_args.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    ctx.finish();
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
