#include "ripkit/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ripkit/version.hpp"

namespace ripkit {

namespace {

nlohmann::json base(const char* kind) {
  nlohmann::json j;
  j["version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

double finite_or_marker(double v) {
  // JSON has no inf; the conventional marker is null.
  return v;
}

void put_number(nlohmann::json& j, const char* key, double v) {
  if (std::isfinite(v)) {
    j[key] = v;
  } else {
    j[key] = nullptr;
  }
}

}  // namespace

std::string report_json(const IncoherenceReport& rep) {
  auto j = base("incoherence");
  j["pass"] = rep.pass;
  j["threshold"] = rep.threshold;
  j["worst_pair"] = {rep.worst_i, rep.worst_j};
  j["worst_overlap"] = rep.worst_overlap;
  return j.dump();
}

std::string report_json(const LowerTailReport& rep) {
  auto j = base("lower_tail");
  j["trials"] = rep.trials;
  j["violations"] = rep.violations;
  j["worst_ratio_p"] = rep.worst_ratio_p;
  j["pass"] = rep.violations == 0;
  return j.dump();
}

std::string report_json(const ExpansionReport& rep) {
  auto j = base("expansion");
  j["ell"] = rep.ell;
  j["delta"] = rep.delta;
  j["pass"] = rep.pass;
  j["worst_set"] = rep.worst_set;
  j["worst_neighborhood"] = rep.worst_neighborhood;
  j["worst_ratio"] = rep.worst_ratio;
  j["subsets_checked"] = rep.subsets_checked;
  j["mode"] = rep.mode == ExpansionReport::Mode::exact ? "exact" : "heuristic";
  return j.dump();
}

std::string report_json(const RipEstimate& est) {
  auto j = base("rip_estimate");
  j["support"] = est.support;
  j["p"] = est.p;
  j["lo_min"] = est.lo_min;
  j["hi_min"] = est.hi_min;
  j["lo_max"] = est.lo_max;
  put_number(j, "hi_max", est.hi_max);
  switch (est.method) {
    case RipEstimate::Method::grid: j["method"] = "grid"; break;
    case RipEstimate::Method::sign_enum: j["method"] = "sign_enum"; break;
    case RipEstimate::Method::heuristic: j["method"] = "heuristic"; break;
  }
  j["converged"] = est.converged;
  j["grid_band"] = est.grid_band;
  return j.dump();
}

std::string report_json(const RipSampledReport& rep) {
  auto j = base("rip_sampled");
  j["worst_min"] = rep.worst_min;
  j["worst_max"] = rep.worst_max;
  j["worst_min_support"] = rep.worst_min_support;
  j["worst_max_support"] = rep.worst_max_support;
  j["num_supports"] = rep.num_supports;
  j["all_converged"] = rep.all_converged;
  return j.dump();
}

std::string report_json(const MomentRow& row) {
  auto j = base("moment_bound");
  j["order"] = row.order;
  j["empirical"] = row.empirical;
  j["std_error"] = row.std_error;
  j["exact"] = row.exact;
  j["bound"] = row.bound;
  j["pass"] = row.pass;
  return j.dump();
}

std::string report_json(const TailReport& rep) {
  auto j = base("tail_report");
  j["trials"] = rep.trials;
  j["empirical_tail"] = rep.empirical_tail;
  j["tail_std_error"] = rep.tail_std_error;
  j["analytic_bound"] = rep.analytic_bound;
  j["pass"] = rep.pass;
  j["regime"] = rep.regime;
  auto rows = nlohmann::json::array();
  for (const auto& row : rep.moment_table) {
    rows.push_back(nlohmann::json::parse(report_json(row)));
  }
  j["moment_table"] = rows;
  return j.dump();
}

std::string report_json(const NegativeAssociationReport& rep) {
  auto j = base("negative_association");
  j["dependent_moment"] = rep.dependent_moment;
  j["independent_moment"] = rep.independent_moment;
  j["se_dependent"] = rep.se_dependent;
  j["se_independent"] = rep.se_independent;
  j["gap"] = rep.gap;
  j["pass"] = rep.pass;
  return j.dump();
}

std::string report_json(const LatalaResult& res) {
  auto j = base("latala_bound");
  j["ok"] = res.ok;
  j["bound"] = res.bound;
  j["u_star"] = res.u_star;
  return j.dump();
}

std::string report_json(const ColumnNormAudit& audit) {
  auto j = base("audit_columns");
  j["pass"] = audit.pass;
  j["worst_col"] = audit.worst_col;
  j["worst_sum"] = audit.worst_sum;
  put_number(j, "slack_low", finite_or_marker(audit.slack_low));
  put_number(j, "slack_high", finite_or_marker(audit.slack_high));
  return j.dump();
}

std::string report_json(const RowOrderStatsAudit& audit) {
  auto j = base("audit_rows");
  j["pass"] = audit.pass;
  j["worst_row"] = audit.worst_row;
  j["worst_t"] = audit.worst_t;
  j["worst_value"] = audit.worst_value;
  j["worst_bound"] = audit.worst_bound;
  put_number(j, "min_slack", audit.min_slack);
  return j.dump();
}

std::string report_json(const FrobeniusAudit& audit) {
  auto j = base("audit_frobenius");
  j["pass"] = audit.pass;
  j["sum_squares"] = audit.sum_squares;
  j["lower_bound"] = audit.lower_bound;
  j["upper_bound"] = audit.upper_bound;
  return j.dump();
}

std::string report_json(const DimensionBound& bound) {
  auto j = base("dimension_bound");
  j["branch1"] = bound.branch1;
  j["branch2"] = bound.branch2;
  j["m_min"] = bound.m_min;
  return j.dump();
}

std::string report_json(const SparsityAudit& audit) {
  auto j = base("sparsity_bound");
  j["pass"] = audit.pass;
  j["m_exceeds_n_over_k"] = audit.m_exceeds_n_over_k;
  j["max_column_sparsity"] = audit.max_column_sparsity;
  j["d_min"] = audit.d_min;
  return j.dump();
}

std::string report_json(const PropertyReport& rep) {
  auto j = base("property_report");
  j["samples"] = rep.samples;
  j["violations"] = rep.violations;
  put_number(j, "worst_margin", rep.worst_margin);
  j["pass"] = rep.pass;
  return j.dump();
}

std::string report_json(const IntegralSumCheck& chk) {
  auto j = base("integral_sum");
  j["lhs"] = chk.lhs;
  j["rhs_scale"] = chk.rhs_scale;
  j["ratio"] = chk.ratio;
  return j.dump();
}

std::string report_json(const std::vector<ClaimRecord>& ledger) {
  auto rows = nlohmann::json::array();
  for (const auto& rec : ledger) {
    nlohmann::json r;
    r["name"] = rec.name;
    r["lhs"] = rec.lhs;
    r["rhs"] = rec.rhs;
    r["slack"] = rec.slack;
    r["pass"] = rec.pass;
    r["applicable"] = rec.applicable;
    rows.push_back(r);
  }
  auto j = base("claim_ledger");
  j["claims"] = rows;
  return j.dump();
}

std::string report_json(const RecoveryResult& res) {
  auto j = base("recovery_result");
  j["x_hat"] = res.x_hat;
  j["residual_p"] = res.residual_p;
  j["objective"] = res.objective;
  j["dual_objective"] = res.dual_objective;
  j["gap"] = res.gap;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["claim_ledger"] = nlohmann::json::parse(report_json(res.claim_ledger))["claims"];
  return j.dump();
}

std::string report_json(const GuaranteeCheck& chk) {
  auto j = base("guarantee_check");
  j["lhs"] = chk.lhs;
  j["rhs"] = chk.rhs;
  j["slack"] = chk.slack;
  j["pass"] = chk.pass;
  return j.dump();
}

std::string report_json(const ConverseReport& rep) {
  auto j = base("rip_from_recovery");
  j["finite"] = rep.finite;
  j["c2_estimate"] = rep.c2_estimate;
  j["opnorm_lower_bound"] = rep.opnorm_lower_bound;
  j["trials"] = rep.trials;
  if (rep.failure_support) {
    j["failure_support"] = *rep.failure_support;
  } else {
    j["failure_support"] = nullptr;
  }
  return j.dump();
}

std::string report_json(const LinearFit& fit) {
  auto j = base("exponent_fit");
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r2"] = fit.r2;
  return j.dump();
}

std::string vector_to_json(const std::vector<double>& v) {
  return nlohmann::json(v).dump();
}

std::vector<double> vector_from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const auto j = nlohmann::json::parse(ss.str());
  if (j.is_array()) return j.get<std::vector<double>>();
  // Also accept {"values": [...]}.
  return j.at("values").get<std::vector<double>>();
}

}  // namespace ripkit
