// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "firmdyn/analysis.hpp"
#include "firmdyn/calibration.hpp"
#include "firmdyn/dynamics.hpp"
#include "firmdyn/equilibrium.hpp"
#include "firmdyn/errors.hpp"
#include "firmdyn/linear_re.hpp"
#include "firmdyn/rfmodel.hpp"
#include "firmdyn/stochproc.hpp"
#include "firmdyn/variants.hpp"

using namespace firmdyn;

namespace {

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void check(bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    details_.push_back((ok ? "ok   " : "MISS ") + detail);
  }
  void note(const std::string& detail) { details_.push_back("note " + detail); }

  bool run(const std::function<void(Criterion&)>& body, double budget_seconds) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body(*this);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream t;
    t << "runtime " << secs << "s (budget " << budget_seconds << "s)";
    check(secs < budget_seconds, t.str());
    std::printf("%s %s\n", ok_ ? "PASS" : "FAIL", name_.c_str());
    for (const auto& d : details_) {
      std::printf("    %s\n", d.c_str());
    }
    std::fflush(stdout);
    return ok_;
  }

 private:
  std::string name_;
  bool ok_ = true;
  std::vector<std::string> details_;
};

std::string fmt(const char* label, double value, const char* expect) {
  std::ostringstream s;
  s.precision(10);
  s << label << " = " << value << " (expected " << expect << ")";
  return s.str();
}

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

IrfSet hf_irf(const SteadyState& ss, int horizon = 40) {
  const HfModel hf = solve_hf(ss);
  IrfOptions o;
  o.horizon = horizon;
  return impulse_response(hf.system, hf.solution, o);
}

IrfSet rf_irf_of(const ModelParams& p, int horizon = 40) {
  IrfOptions o;
  o.horizon = horizon;
  return rf_irf(solve_rf(RFParams::from(p)), o);
}

void discretization(Criterion& c) {
  const QuarterlyProcess q = quarterly_from_annual(0.9771, 0.2676, 0.9);
  c.check(near(q.persistence, 0.99422, 1e-5), fmt("rho_z", q.persistence, "0.99422 +- 1e-5"));
  c.check(near(q.innovation_sd, 0.01350, 1e-5), fmt("sigma_z", q.innovation_sd, "0.01350 +- 1e-5"));
  const MarkovChain chain = rouwenhorst({q.persistence, q.innovation_sd, 0.0}, 50);
  const Eigen::VectorXd pi = chain_stationary(chain.transition);
  const boost::math::binomial_distribution<double> binom(49, 0.5);
  double err = 0.0;
  for (int i = 0; i < 50; ++i) {
    err = std::max(err, std::abs(pi(i) - boost::math::pdf(binom, i)));
  }
  c.check(err < 1e-10, fmt("max |pi - binomial(49,1/2)|", err, "< 1e-10"));
}

void stationary(Criterion& c) {
  const SteadyState ss = solve_stationary_equilibrium(ModelParams::defaults());
  c.check(ss.prices.p == 5.0 / 6.0, fmt("p", ss.prices.p, "5/6 exactly"));
  c.check(near(100.0 * ss.agg.exit_rate_annual, 8.6, 0.3), fmt("annual exit rate (%)", 100.0 * ss.agg.exit_rate_annual, "8.6 +- 0.3"));
  c.check(near(ss.agg.avg_incumbent_size, 19.2, 0.5), fmt("incumbent size", ss.agg.avg_incumbent_size, "19.2 +- 0.5"));
  c.check(near(ss.agg.avg_exiting_size, 7.7, 0.5), fmt("exiting size", ss.agg.avg_exiting_size, "7.7 +- 0.5"));
  c.check(near(ss.agg.employment, 0.6, 0.01), fmt("N", ss.agg.employment, "0.6 +- 0.01"));
}

void calibration_round_trip(Criterion& c) {
  ModelParams truth = ModelParams::calibrated();
  truth.operating_cost.location += 0.25;
  truth.operating_cost.scale -= 0.2;
  truth.entry_cost = truth.operating_cost;
  truth.productivity.mean += 0.03;
  const Moments m = model_moments(truth);
  const CalibrationTargets targets{m.annual_exit_rate, m.avg_incumbent_size, m.avg_exiting_size, m.employment};
  const ModelParams expected = scale_to_employment(truth, m.employment);
  const CalibrationResult r = calibrate(targets, ModelParams::defaults());
  auto rel = [](double a, double b) { return std::abs(a / b - 1.0); };
  const double worst = std::max({rel(r.params.operating_cost.location, expected.operating_cost.location),
                                 rel(r.params.operating_cost.scale, expected.operating_cost.scale),
                                 rel(r.params.productivity.mean, expected.productivity.mean),
                                 rel(r.params.entrant_mass, expected.entrant_mass),
                                 rel(r.params.kappa0, expected.kappa0)});
  c.check(worst < 1e-6, fmt("max relative parameter error", worst, "< 1e-6"));
}

void rf_oracle(Criterion& c) {
  const ModelParams p = ModelParams::calibrated();
  const RFParams rp = RFParams::from(p);
  const RFSolution closed = solve_rf(rp);
  const LinearSolution generic = solve_linear_re(rf_linear_system(rp), rp.rho_m);
  const Eigen::Vector3d a(closed.a_y, closed.a_pi, closed.a_R);
  const double err = std::max((generic.Q - a).cwiseAbs().maxCoeff(), generic.P.cwiseAbs().maxCoeff());
  c.check(err < 1e-9, fmt("generic solver vs closed form", err, "< 1e-9"));
  const IrfSet irf = rf_irf_of(p);
  c.check(near(irf.column("output")(0), -2.0, 0.01), fmt("RF output impact (%)", irf.column("output")(0), "-2.00 +- 0.01"));
  const double ac = irf.summary.at("output").autocorr4;
  c.check(near(ac, 0.0625, 1e-10), fmt("RF output AC4", ac, "0.0625 +- 1e-10"));
}

void hf_irfs(Criterion& c) {
  const SteadyState ss = solve_stationary_equilibrium(ModelParams::calibrated());
  const IrfSet irf = hf_irf(ss);
  const IrfSet rf = rf_irf_of(ss.params);
  const double y = irf.column("output")(0);
  c.check(near(y, -2.0023, 0.05), fmt("HF output impact (%)", y, "-2.0023 +- 0.05"));
  c.check(near(y, rf.column("output")(0), 0.05), fmt("HF - RF output impact (pp)", y - rf.column("output")(0), "|.| <= 0.05"));
  const double ex = irf.column("exit_rate_bp")(0), en = irf.column("entry_rate_bp")(0);
  c.check(near(ex, 2.5, 1.0), fmt("exit impact (bp)", ex, "2.5 +- 1"));
  c.check(en < 0.0 && std::abs(en) < 1.0, fmt("entry impact (bp)", en, "negative, |.| < 1"));
  const double g20 = irf.column("gamma")(20);
  c.check(near(g20, -0.03, 0.015), fmt("Gamma at 20q (%)", g20, "-0.03 +- 0.015"));
  const double ac = irf.summary.at("output").autocorr4;
  c.check(near(ac, 0.064, 0.003), fmt("HF output AC4", ac, "0.064 +- 0.003"));
  const double a0 = irf.column("tfp")(0), aac = irf.summary.at("tfp").autocorr4;
  c.check(a0 < 0.0, fmt("A impact (%)", a0, "negative"));
  c.check(near(aac, 0.95, 0.03), fmt("A AC4", aac, "0.95 +- 0.03"));
}

void determinacy(Criterion& c) {
  ModelParams p = ModelParams::calibrated();
  const HfModel active = solve_hf(solve_stationary_equilibrium(p));
  c.check(active.solution.determinate, "phi = 1.5 determinate");
  p.phi = 0.9;
  try {
    solve_hf(solve_stationary_equilibrium(p));
    c.check(false, "phi = 0.9 raised no error");
  } catch (const IndeterminacyError& e) {
    std::ostringstream s;
    s << "phi = 0.9 indeterminate: " << e.stable_roots() << " stable roots, " << e.required_stable() << " required";
    c.check(true, s.str());
  }
}

void decomposition(Criterion& c) {
  const SteadyState ss = solve_stationary_equilibrium(ModelParams::calibrated());
  const IrfSet irf = hf_irf(ss, 200);
  const std::vector<Contribution> parts = price_contributions(irf, ss);
  double total = 0.0, r = 0.0, w = 0.0, p = 0.0;
  for (const Contribution& x : parts) {
    const double v = x.exit_bp(0);
    if (x.channel == "total") total = v;
    if (x.channel == "r") r = v;
    if (x.channel == "w") w = v;
    if (x.channel == "p") p = v;
  }
  c.check(w * p < 0.0, fmt("w-only x p-only exit impact (bp^2)", w * p, "negative"));
  c.check(r >= 0.7 * total, fmt("r-only share of total exit impact", r / total, ">= 0.7"));
  const std::vector<int> horizons{0, 4, 8, 20};
  const Eigen::MatrixXd d = distribution_shift(irf_measures(irf), ss.measure.mass, horizons);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) worst = std::max(worst, std::abs(d.col(j).sum()));
  c.check(worst < 1e-12, fmt("max |sum of distribution deltas|", worst, "< 1e-12"));
}

void variants(Criterion& c) {
  const ModelParams base = ModelParams::calibrated();
  const SteadyState ss = solve_stationary_equilibrium(base);
  const IrfSet b = hf_irf(ss);
  const double bx = b.column("exit_rate_bp")(0), be = b.column("entry_rate_bp")(0);

  for (const char* name : {"labor_costs", "production_costs"}) {
    const IrfSet v = hf_irf(variant_steady_state(base, variant_by_name(name)));
    const double x = v.column("exit_rate_bp")(0), e = v.column("entry_rate_bp")(0);
    std::ostringstream s;
    s << name << ": exit " << x << "bp, entry " << e << "bp (signs opposite to baseline " << bx << ", " << be << ")";
    c.check(x * bx < 0.0 && e * be < 0.0, s.str());
  }
  {
    const IrfSet v = hf_irf(variant_steady_state(base, variant_by_name("risk_neutral")));
    const double x = v.column("exit_rate_bp")(0), e = v.column("entry_rate_bp")(0);
    std::ostringstream s;
    s << "risk_neutral: exit " << x << "bp, entry " << e << "bp (both smaller in magnitude than baseline)";
    c.check(std::abs(x) < std::abs(bx) && std::abs(e) < std::abs(be), s.str());
  }
  {
    const InterestSensitivity is = calibrate_interest_sensitivity(ss);
    c.check(near(is.exit_bp, 10.0, 0.2), fmt("interest-sensitive exit (bp)", is.exit_bp, "10 +- 0.2"));
    c.check(near(is.entry_bp, -4.5, 0.2), fmt("interest-sensitive entry (bp)", is.entry_bp, "-4.5 +- 0.2"));
    SteadyState sens = ss;
    sens.params.variant.alpha_c = is.alpha_c;
    sens.params.variant.alpha_e = is.alpha_e;
    sens.env.variant = sens.params.variant;
    const double gap = hf_irf(sens).column("output")(0) - rf_irf_of(base).column("output")(0);
    c.check(std::abs(gap) >= 0.1 / 3.0 && std::abs(gap) <= 0.3,
            fmt("interest-sensitive HF - RF output (pp)", gap, "order 0.1, |.| in [0.033, 0.3]"));
  }
  {
    const IrfSet v = hf_irf(variant_steady_state(base, variant_by_name("free_entry")));
    const double x = v.column("exit_rate_bp")(0), e = v.column("entry_rate_bp")(0);
    c.check(near(e, -4.5, 1.0), fmt("free entry (alpha 15) entry (bp)", e, "-4.5 +- 1"));
    c.check(near(x, 0.8, 1.0), fmt("free entry (alpha 15) exit (bp)", x, "0.8 +- 1"));
  }
}

void excluded(Criterion& c) {
  c.note("proxy-SVAR point estimates need external data and are not reproduced;");
  c.note("the discretization, equilibrium, IRF, determinacy, decomposition and variant suites stand in for them");
  c.check(true, "excluded by design");
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    void (*body)(Criterion&);
    double budget;
  };
  const Entry entries[] = {
      {"discretization: Rouwenhorst chain and quarterly mapping", discretization, 1.0},
      {"stationary equilibrium at published parameters", stationary, 30.0},
      {"calibration round-trip", calibration_round_trip, 600.0},
      {"representative-firm oracle", rf_oracle, 60.0},
      {"heterogeneous-firm impulse responses", hf_irfs, 300.0},
      {"determinacy", determinacy, 300.0},
      {"decomposition properties", decomposition, 300.0},
      {"variant signs and magnitudes", variants, 900.0},
      {"proxy-SVAR estimates excluded", excluded, 1.0},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c(e.name);
    if (!c.run(e.body, e.budget)) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, std::size(entries));
  return failed == 0 ? 0 : 1;
}
