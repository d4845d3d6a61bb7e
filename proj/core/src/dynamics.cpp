#include "firmdyn/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "firmdyn/errors.hpp"

namespace firmdyn {

EquilibriumSystem::EquilibriumSystem(const SteadyState& ss) : ss_(ss) {
  const ModelParams& par = ss_.params;
  layout_.k = ss_.chain.size();
  layout_.free_entry = par.variant.free_entry.enabled;
  const int k = layout_.k;

  value_ss_ = ss_.firm.value;
  gamma_ss_ = ss_.measure.total();
  if (!(gamma_ss_ > 0.0) || (value_ss_.array() <= 0.0).any()) {
    throw NumericalError("build_system: steady state has no firms or non-positive values");
  }
  if (layout_.free_entry) {
    e_tilde_ = par.variant.free_entry.e_tilde;
    if (!(e_tilde_ > 0.0)) {
      throw ConfigError("build_system: free entry needs a solved entry cost e_tilde > 0");
    }
  }

  Eigen::VectorXd incumbents = ss_.measure.mass;
  if (!par.variant.delayed_entry) {
    incumbents -= entrants_in_measure(ss_.firm, ss_.chain, ss_.measure.entrant_scale, false);
  }

  x_ss_.resize(layout_.size());
  x_ss_.head(k) = value_ss_.array().log();
  x_ss_.segment(k, k) = incumbents / gamma_ss_;
  x_ss_[layout_.employment()] = std::log(ss_.agg.employment);
  x_ss_[layout_.consumption()] = std::log(ss_.agg.consumption);
  x_ss_[layout_.wage()] = std::log(ss_.prices.w);
  x_ss_[layout_.nominal_rate()] = std::log(ss_.nominal_rate);
  x_ss_[layout_.inflation()] = std::log(ss_.inflation);
  x_ss_[layout_.rel_price()] = std::log(ss_.prices.p);
  x_ss_[layout_.output()] = std::log(ss_.agg.output);
  if (layout_.free_entry) {
    x_ss_[layout_.entrants()] = std::log(ss_.measure.entrant_scale);
  }
}

PeriodState EquilibriumSystem::evaluate(const Eigen::VectorXd& lag, const Eigen::VectorXd& cur,
                                        const Eigen::VectorXd& lead, double /*shock*/) const {
  const int n = size();
  if (lag.size() != n || cur.size() != n || lead.size() != n) {
    throw std::invalid_argument("EquilibriumSystem: state vectors have the wrong size");
  }
  const SystemLayout& L = layout_;
  const ModelParams& par = ss_.params;
  const int k = L.k;

  PeriodState s;
  s.value = cur.head(k).array().exp();
  s.incumbents = cur.segment(k, k) * gamma_ss_;
  s.employment = std::exp(cur[L.employment()]);
  s.consumption = std::exp(cur[L.consumption()]);
  s.wage = std::exp(cur[L.wage()]);
  s.nominal_rate = std::exp(cur[L.nominal_rate()]);
  s.inflation = std::exp(cur[L.inflation()]);
  s.rel_price = std::exp(cur[L.rel_price()]);
  s.output = std::exp(cur[L.output()]);
  s.entrant_scale = L.free_entry ? std::exp(cur[L.entrants()]) : par.entrant_mass;
  s.consumption_next = std::exp(lead[L.consumption()]);
  s.inflation_next = std::exp(lead[L.inflation()]);
  s.output_next = std::exp(lead[L.output()]);

  s.sdf = par.beta * std::pow(s.consumption_next / s.consumption, -par.sigma);
  s.real_rate_gap = s.nominal_rate / s.inflation_next - 1.0 / par.beta;
  s.prices.p = s.rel_price;
  s.prices.w = s.wage;
  s.prices.sdf = s.sdf;
  s.prices.operating_cost_shift = par.variant.alpha_c * s.real_rate_gap;
  s.prices.entry_cost_shift = par.variant.alpha_e * s.real_rate_gap;

  const Eigen::VectorXd value_next = lead.head(k).array().exp();
  s.firm = firm_policies(ss_.env, s.prices, s.value, value_next);
  s.entrant_flow = s.entrant_scale * s.firm.entry_prob.cwiseProduct(ss_.chain.entrant_dist);

  const Eigen::VectorXd incumbents_prev = lag.segment(k, k) * gamma_ss_;
  if (par.variant.delayed_entry) {
    s.operating = incumbents_prev;
    s.carried = s.firm.continue_prob.cwiseProduct(s.operating) + s.entrant_flow;
  } else {
    s.operating = incumbents_prev + s.entrant_flow;
    s.carried = s.firm.continue_prob.cwiseProduct(s.operating);
  }
  s.exiting_mass = s.firm.exit_prob().dot(s.operating);

  double entry_costs = s.entrant_scale * ss_.chain.entrant_dist.dot(s.firm.expected_entry_cost);
  if (L.free_entry) {
    const double cost =
        e_tilde_ * std::exp(par.variant.free_entry.alpha * (s.entrant_scale - ss_.measure.entrant_scale));
    entry_costs = cost * s.entrant_scale;
  }
  s.transfers = s.firm.expected_operating_cost.dot(s.operating) + entry_costs;
  const double rotemberg = 0.5 * par.xi * (s.inflation - 1.0) * (s.inflation - 1.0);
  s.dividends = s.rel_price * s.output - s.wage * s.employment - s.transfers +
                (1.0 - s.rel_price - rotemberg) * s.output;
  return s;
}

Eigen::VectorXd EquilibriumSystem::residual(const Eigen::VectorXd& lag, const Eigen::VectorXd& cur,
                                            const Eigen::VectorXd& lead, double shock) const {
  const PeriodState s = evaluate(lag, cur, lead, shock);
  const SystemLayout& L = layout_;
  const ModelParams& par = ss_.params;
  const int k = L.k;
  const Eigen::ArrayXd z = ss_.chain.log_grid.array().exp();

  Eigen::VectorXd r(size());
  const Eigen::ArrayXd bellman = s.firm.profit.array() +
                                 s.firm.exit_threshold.array() * s.firm.continue_prob.array() -
                                 s.firm.expected_operating_cost.array();
  r.head(k) = ((s.value.array() - bellman) / value_ss_.array()).matrix();
  r.segment(k, k) = (s.incumbents - ss_.chain.transition.transpose() * s.carried) / gamma_ss_;

  const double pi = s.inflation;
  const double pi_next = s.inflation_next;
  const double y = s.output;
  const int b = 2 * k;
  r[b] = 1.0 - s.firm.labor.dot(s.operating) / s.employment;
  r[b + 1] = 1.0 - par.kappa0 * std::pow(s.consumption, par.sigma) * std::pow(s.employment, par.kappa1) / s.wage;
  r[b + 2] = s.sdf * s.nominal_rate / pi_next - 1.0;
  r[b + 3] = std::pow(pi, par.phi) * std::exp(shock) - s.nominal_rate * par.beta;
  r[b + 4] = (1.0 - par.gamma) + par.gamma * s.rel_price - par.xi * (pi - 1.0) * pi +
             par.xi * s.sdf * (pi_next - 1.0) * pi_next * s.output_next / y;
  r[b + 5] = 1.0 - (z * s.firm.labor.array().pow(par.nu)).matrix().dot(s.operating) / y;
  r[b + 6] = 1.0 - (s.consumption + 0.5 * par.xi * (pi - 1.0) * (pi - 1.0) * y) / y;
  if (L.free_entry) {
    const double entrant_value = s.value.dot(ss_.chain.entrant_dist);
    const double cost =
        e_tilde_ * std::exp(par.variant.free_entry.alpha * (s.entrant_scale - ss_.measure.entrant_scale));
    r[b + 7] = 1.0 - entrant_value / cost;
  }
  return r;
}

EquilibriumSystem build_system(const SteadyState& ss) { return EquilibriumSystem(ss); }

LinearSystem linearize(const EquilibriumSystem& system, double step) {
  const Eigen::VectorXd& x = system.steady_vector();
  const int n = system.size();
  const Eigen::VectorXd r0 = system.residual(x, x, x, 0.0);
  if (!(r0.cwiseAbs().maxCoeff() < 1e-8)) {
    std::ostringstream msg;
    msg << "linearize: steady-state residual " << r0.cwiseAbs().maxCoeff() << " exceeds 1e-8";
    throw NumericalError(msg.str());
  }

  LinearSystem sys;
  sys.A.resize(n, n);
  sys.B.resize(n, n);
  sys.C.resize(n, n);
  const double inv = 1.0 / (2.0 * step);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd dn = x;
    up[j] += step;
    dn[j] -= step;
    sys.A.col(j) = (system.residual(x, x, up, 0.0) - system.residual(x, x, dn, 0.0)) * inv;
    sys.B.col(j) = (system.residual(x, up, x, 0.0) - system.residual(x, dn, x, 0.0)) * inv;
    sys.C.col(j) = (system.residual(up, x, x, 0.0) - system.residual(dn, x, x, 0.0)) * inv;
  }
  sys.D = (system.residual(x, x, x, step) - system.residual(x, x, x, -step)) * inv;
  sys.validate();
  return sys;
}

std::string Normalization::describe() const {
  std::ostringstream out;
  if (kind == Kind::real_rate) {
    out << "real_rate_impact=" << target;
  } else {
    out << "shock=" << target;
  }
  return out.str();
}

Eigen::VectorXd IrfSet::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) {
      return data.col(static_cast<Eigen::Index>(j));
    }
  }
  throw std::out_of_range("IrfSet: no column '" + name + "'");
}

const std::vector<std::string>& canonical_irf_columns() {
  static const std::vector<std::string> names = {
      "output",       "consumption", "employment", "real_wage", "rel_price", "inflation", "nominal_rate",
      "real_rate",    "entry_rate_bp", "exit_rate_bp", "gamma", "tfp",       "dividends"};
  return names;
}

double autocorrelation4(const Eigen::VectorXd& response) {
  const Eigen::Index h = response.size();
  if (h <= 4) {
    throw std::invalid_argument("autocorrelation4: response too short");
  }
  const double denom = response.squaredNorm();
  if (denom == 0.0) {
    return 0.0;
  }
  return response.head(h - 4).dot(response.tail(h - 4)) / denom;
}

std::map<std::string, SeriesSummary> summarize(const std::vector<std::string>& columns,
                                               const Eigen::MatrixXd& data) {
  std::map<std::string, SeriesSummary> out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Eigen::VectorXd col = data.col(static_cast<Eigen::Index>(j));
    SeriesSummary s;
    s.impact = col[0];
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    s.peak = col[arg];
    s.peak_horizon = static_cast<int>(arg);
    s.autocorr4 = autocorrelation4(col);
    out[columns[j]] = s;
  }
  return out;
}

namespace {

// Level quantities behind the derived IRF columns.
struct Derived {
  double mass = 0.0;
  double exiting = 0.0;
  double entering = 0.0;
  double tfp = 0.0;
  double dividends = 0.0;
};

Derived derived_levels(const EquilibriumSystem& sys, const Eigen::VectorXd& lag, const Eigen::VectorXd& cur,
                       const Eigen::VectorXd& lead) {
  const PeriodState s = sys.evaluate(lag, cur, lead, 0.0);
  return {s.operating.sum(), s.exiting_mass, s.entrant_flow.sum(),
          aggregate_tfp(s.operating, sys.steady().chain.log_grid, sys.steady().params.nu), s.dividends};
}

}  // namespace

IrfSet impulse_response(const EquilibriumSystem& system, const LinearSolution& solution, const IrfOptions& options) {
  if (!solution.determinate) {
    throw IndeterminacyError("impulse_response: solution is not determinate", solution.roots.stable,
                             system.size());
  }
  if (options.horizon < 1 || options.summary_horizon < 8) {
    throw std::invalid_argument("impulse_response: horizon too short");
  }
  const SystemLayout& L = system.layout();
  const int n = system.size();
  const int hs = std::max(options.horizon, options.summary_horizon);
  const double rho = solution.shock_persistence;

  // Unit-shock state deviations for t = 0..hs+2.
  Eigen::MatrixXd X(hs + 3, n);
  X.row(0) = solution.Q.transpose();
  double shock = 1.0;
  for (int t = 1; t < hs + 3; ++t) {
    shock *= rho;
    X.row(t) = (solution.P * X.row(t - 1).transpose() + solution.Q * shock).transpose();
  }

  double scale = options.normalization.target;
  if (options.normalization.kind == Normalization::Kind::real_rate) {
    const double unit = X(0, L.nominal_rate()) - X(1, L.inflation());
    if (!(std::abs(unit) > 1e-14)) {
      throw NumericalError("impulse_response: shock does not move the real rate");
    }
    scale /= unit;
  }
  X *= scale;

  const Eigen::VectorXd& xss = system.steady_vector();
  const Derived base = derived_levels(system, xss, xss, xss);
  const double exit_ss = base.exiting / base.mass;
  const double entry_ss = base.entering / base.mass;

  // First-order responses of the derived levels by central differences along the path.
  const double eps = 1e-3;
  std::vector<Derived> d(hs + 2);
  for (int t = 0; t < hs + 2; ++t) {
    const Eigen::VectorXd lag = t > 0 ? Eigen::VectorXd(X.row(t - 1).transpose()) : Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd cur = X.row(t).transpose();
    const Eigen::VectorXd lead = X.row(t + 1).transpose();
    const Derived up = derived_levels(system, xss + eps * lag, xss + eps * cur, xss + eps * lead);
    const Derived dn = derived_levels(system, xss - eps * lag, xss - eps * cur, xss - eps * lead);
    const double inv = 1.0 / (2.0 * eps);
    d[t] = {(up.mass - dn.mass) * inv, (up.exiting - dn.exiting) * inv, (up.entering - dn.entering) * inv,
            (up.tfp - dn.tfp) * inv, (up.dividends - dn.dividends) * inv};
  }

  IrfSet irf;
  irf.model = "hf";
  irf.columns = canonical_irf_columns();
  irf.shock_scale = scale;
  irf.normalization = options.normalization.describe();
  Eigen::MatrixXd data(hs + 1, irf.columns.size());
  for (int t = 0; t <= hs; ++t) {
    const double dmass_prev = t > 0 ? d[t - 1].mass : 0.0;
    // exit_t = exiting_t / avg(Gamma_t, Gamma_t+1); entry_t = entrants_t / avg(Gamma_t-1, Gamma_t)
    const double exit_dev = (d[t].exiting - exit_ss * 0.5 * (d[t].mass + d[t + 1].mass)) / base.mass;
    const double entry_dev = (d[t].entering - entry_ss * 0.5 * (d[t].mass + dmass_prev)) / base.mass;
    data.row(t) << 100.0 * X(t, L.output()), 100.0 * X(t, L.consumption()), 100.0 * X(t, L.employment()),
        100.0 * X(t, L.wage()), 100.0 * X(t, L.rel_price()), 100.0 * X(t, L.inflation()),
        100.0 * X(t, L.nominal_rate()), 100.0 * (X(t, L.nominal_rate()) - X(t + 1, L.inflation())),
        1e4 * entry_dev, 1e4 * exit_dev, 100.0 * d[t].mass / base.mass, 100.0 * d[t].tfp / base.tfp,
        100.0 * d[t].dividends / base.dividends;
  }
  irf.summary = summarize(irf.columns, data);
  irf.data = data.topRows(options.horizon + 1);
  irf.states = X.topRows(options.horizon + 2);

  irf.path.reserve(options.horizon + 1);
  for (int t = 0; t <= options.horizon; ++t) {
    const Eigen::VectorXd lag = t > 0 ? Eigen::VectorXd(xss + X.row(t - 1).transpose()) : xss;
    irf.path.push_back(
        system.evaluate(lag, xss + X.row(t).transpose(), xss + X.row(t + 1).transpose(), scale * std::pow(rho, t)));
  }
  return irf;
}

HfModel solve_hf(const SteadyState& ss, const LinearReOptions& options) {
  EquilibriumSystem system(ss);
  LinearSystem linear = linearize(system);
  LinearSolution solution = solve_linear_re(linear, ss.params.rho_m, options);
  return {std::move(system), std::move(linear), std::move(solution)};
}

}  // namespace firmdyn
