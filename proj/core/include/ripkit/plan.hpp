#pragma once

#include <cstdint>
#include <string>

namespace ripkit {

// Leading constants for the (m, d, l, delta) formulas. The theory leaves
// these as p^{O(p)} / Theta_tau factors; the defaults below were fixed by
// the calibration runs described in docs/calibration.md so that the
// shipped acceptance sizes pass with comfortable probability margins.
struct PlanConstants {
  // p >= 2 regime. When p_power_scaling is on, the row-count constant is
  // c_m_ge2 * p^p, tracking the p-dependence the theory prescribes;
  // unit() turns the scaling off so C_m is exactly 1.
  double c_m_ge2 = 8.0;
  double c_d_ge2 = 3.0;
  bool p_power_scaling = true;
  // 1 < p < 2 regime.
  double c_ell = 1.0;
  double c_delta = 1.0;
  double c_d_lt2 = 1.0;
  double c_m_lt2 = 8.0;

  static PlanConstants unit();
};

enum class PlanRegime { p_ge_2, p_lt_2 };

struct ParamPlan {
  std::uint32_t m = 0;
  std::uint32_t d = 0;
  std::uint32_t ell = 1;   // block size; 1 for the p >= 2 plan
  double delta = 0.0;      // expansion slack, or dk/m for p >= 2
  PlanRegime regime = PlanRegime::p_ge_2;
  PlanConstants constants;

  // Problem parameters the plan was derived from.
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  double p = 2.0;
  double eps = 0.0;
  double tau = 0.0;  // p_lt_2 only

  void validate() const;
};

// m = C_m(p) k^p eps^-2 (ln n)^(p-1), d = C_d(p) k^(p-1) eps^-1 (ln n)^(p-1),
// rounded up, d <= m enforced; delta = dk/m recorded.
ParamPlan plan_params_p_ge2(std::uint32_t n, std::uint32_t k, double p,
                            double eps,
                            const PlanConstants& constants = PlanConstants());

// l = ceil(C_l k^(2-p)), delta = C_delta min{eps/k^(p-1),
// eps^(1/(p-1))/k^((p-1)/p)}, d = ceil(C_d ln n / delta),
// m = ceil(C_m d l / delta).
ParamPlan plan_params_p_lt2(std::uint32_t n, std::uint32_t k, double p,
                            double eps, double tau,
                            const PlanConstants& constants = PlanConstants());

std::string plan_to_json(const ParamPlan& plan);
ParamPlan plan_from_json(const std::string& text);
void save_plan(const ParamPlan& plan, const std::string& path);
ParamPlan load_plan(const std::string& path);

}  // namespace ripkit
