#include "ripkit/plan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ripkit/version.hpp"

namespace ripkit {

PlanConstants PlanConstants::unit() {
  PlanConstants c;
  c.c_m_ge2 = 1.0;
  c.p_power_scaling = false;
  c.c_d_ge2 = 1.0;
  c.c_ell = 1.0;
  c.c_delta = 1.0;
  c.c_d_lt2 = 1.0;
  c.c_m_lt2 = 1.0;
  return c;
}

void ParamPlan::validate() const {
  if (d == 0 || d > m) throw std::invalid_argument("plan: need 1 <= d <= m");
  if (m < k) throw std::invalid_argument("plan: need m >= k");
  if (regime == PlanRegime::p_lt_2) {
    if (ell < 1) throw std::invalid_argument("plan: need ell >= 1");
    if (!(delta > 0.0 && delta < 0.5))
      throw std::invalid_argument("plan: need delta in (0, 1/2)");
  }
}

namespace {

std::uint32_t ceil_u32(double x) {
  if (!(x >= 0.0) || x > 4e9) throw std::invalid_argument("plan: value out of range");
  return static_cast<std::uint32_t>(std::ceil(x));
}

}  // namespace

ParamPlan plan_params_p_ge2(std::uint32_t n, std::uint32_t k, double p,
                            double eps, const PlanConstants& constants) {
  if (p < 2.0) throw std::invalid_argument("plan_params_p_ge2: p must be >= 2");
  if (k == 0 || k > n) throw std::invalid_argument("plan_params_p_ge2: need 1 <= k <= n");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("plan_params_p_ge2: eps must be in (0, 1/2)");

  const double logn = std::log(static_cast<double>(n));
  const double log_factor = std::pow(std::max(logn, 1.0), p - 1.0);
  const double cm =
      constants.c_m_ge2 * (constants.p_power_scaling ? std::pow(p, p) : 1.0);
  const double cd = constants.c_d_ge2;

  ParamPlan plan;
  plan.constants = constants;
  plan.regime = PlanRegime::p_ge_2;
  plan.n = n;
  plan.k = k;
  plan.p = p;
  plan.eps = eps;
  plan.ell = 1;
  plan.m = std::max<std::uint32_t>(
      {ceil_u32(cm * std::pow(k, p) / (eps * eps) * log_factor), k, 1});
  plan.d = std::max<std::uint32_t>(
      ceil_u32(cd * std::pow(k, p - 1.0) / eps * log_factor), 1);
  plan.d = std::min(plan.d, plan.m);
  plan.delta = static_cast<double>(plan.d) * k / plan.m;
  return plan;
}

ParamPlan plan_params_p_lt2(std::uint32_t n, std::uint32_t k, double p,
                            double eps, double tau,
                            const PlanConstants& constants) {
  if (!(tau > 0.0))
    throw std::invalid_argument("plan_params_p_lt2: tau must be positive");
  if (!(1.0 + tau <= p && p <= 2.0 - tau))
    throw std::invalid_argument(
        "plan_params_p_lt2: p must satisfy 1 + tau <= p <= 2 - tau");
  if (k == 0 || k > n) throw std::invalid_argument("plan_params_p_lt2: need 1 <= k <= n");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("plan_params_p_lt2: eps must be in (0, 1/2)");

  const double logn = std::max(std::log(static_cast<double>(n)), 1.0);
  const double kd = static_cast<double>(k);
  const double delta =
      constants.c_delta * std::min(eps / std::pow(kd, p - 1.0),
                                   std::pow(eps, 1.0 / (p - 1.0)) /
                                       std::pow(kd, (p - 1.0) / p));

  ParamPlan plan;
  plan.constants = constants;
  plan.regime = PlanRegime::p_lt_2;
  plan.n = n;
  plan.k = k;
  plan.p = p;
  plan.eps = eps;
  plan.tau = tau;
  plan.ell = std::max<std::uint32_t>(
      ceil_u32(constants.c_ell * std::pow(kd, 2.0 - p)), 1);
  plan.delta = delta;
  plan.d = std::max<std::uint32_t>(ceil_u32(constants.c_d_lt2 * logn / delta), 1);
  plan.m = std::max<std::uint32_t>(
      {ceil_u32(constants.c_m_lt2 * plan.d * plan.ell / delta), plan.d, k});
  plan.validate();
  return plan;
}

namespace {

nlohmann::json constants_to_json(const PlanConstants& c) {
  return {{"c_m_ge2", c.c_m_ge2},   {"c_d_ge2", c.c_d_ge2},
          {"c_ell", c.c_ell},       {"c_delta", c.c_delta},
          {"c_d_lt2", c.c_d_lt2},   {"c_m_lt2", c.c_m_lt2},
          {"p_power_scaling", c.p_power_scaling}};
}

PlanConstants constants_from_json(const nlohmann::json& j) {
  PlanConstants c;
  c.c_m_ge2 = j.value("c_m_ge2", c.c_m_ge2);
  c.c_d_ge2 = j.value("c_d_ge2", c.c_d_ge2);
  c.c_ell = j.value("c_ell", c.c_ell);
  c.c_delta = j.value("c_delta", c.c_delta);
  c.c_d_lt2 = j.value("c_d_lt2", c.c_d_lt2);
  c.c_m_lt2 = j.value("c_m_lt2", c.c_m_lt2);
  c.p_power_scaling = j.value("p_power_scaling", c.p_power_scaling);
  return c;
}

}  // namespace

std::string plan_to_json(const ParamPlan& plan) {
  nlohmann::json j;
  j["version"] = kSchemaVersion;
  j["kind"] = "param_plan";
  j["m"] = plan.m;
  j["d"] = plan.d;
  j["ell"] = plan.ell;
  j["delta"] = plan.delta;
  j["regime"] = plan.regime == PlanRegime::p_ge_2 ? "p_ge_2" : "p_lt_2";
  j["constants"] = constants_to_json(plan.constants);
  j["n"] = plan.n;
  j["k"] = plan.k;
  j["p"] = plan.p;
  j["eps"] = plan.eps;
  j["tau"] = plan.tau;
  return j.dump(2);
}

ParamPlan plan_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("version", 0) != kSchemaVersion)
    throw std::invalid_argument("plan json: unsupported version");
  ParamPlan plan;
  plan.m = j.at("m").get<std::uint32_t>();
  plan.d = j.at("d").get<std::uint32_t>();
  plan.ell = j.at("ell").get<std::uint32_t>();
  plan.delta = j.at("delta").get<double>();
  plan.regime = j.at("regime").get<std::string>() == "p_lt_2"
                    ? PlanRegime::p_lt_2
                    : PlanRegime::p_ge_2;
  plan.constants = constants_from_json(j.value("constants", nlohmann::json::object()));
  plan.n = j.value("n", 0u);
  plan.k = j.value("k", 0u);
  plan.p = j.value("p", 2.0);
  plan.eps = j.value("eps", 0.0);
  plan.tau = j.value("tau", 0.0);
  return plan;
}

void save_plan(const ParamPlan& plan, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << plan_to_json(plan) << "\n";
}

ParamPlan load_plan(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return plan_from_json(ss.str());
}

}  // namespace ripkit
