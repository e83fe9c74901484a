#include "mrange/identification.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <set>
#include <sstream>

#include "mrange/errors.hpp"

namespace mrange {

double rmse_of(const std::vector<double>& residuals) {
  if (residuals.empty()) return 0.0;
  double ss = 0.0;
  for (double r : residuals) ss += r * r;
  return std::sqrt(ss / static_cast<double>(residuals.size()));
}

// ---- motor ------------------------------------------------------------------

namespace {

// Least squares on column-scaled design; columns listed in `active`.
Eigen::VectorXd solve_scaled(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs,
                             const std::vector<int>& active) {
  const auto n = static_cast<Eigen::Index>(design.rows());
  const auto m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd a(n, m);
  Eigen::VectorXd scale(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    a.col(j) = design.col(active[static_cast<std::size_t>(j)]);
    scale(j) = a.col(j).cwiseAbs().maxCoeff();
    if (scale(j) == 0.0) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < m) throw FitError("motor fit: rank-deficient design");
  Eigen::VectorXd x = qr.solve(rhs);
  return x.cwiseQuotient(scale);
}

}  // namespace

MotorFit fit_motor(const ThrustLog& log) {
  std::set<double> distinct;
  for (const auto& r : log.rows) {
    if (!(r.omega >= 0.0) || !std::isfinite(r.omega))
      throw InputError("thrust log: omega must be finite and >= 0");
    if (!std::isfinite(r.torque) || !std::isfinite(r.power))
      throw InputError("thrust log: non-finite torque or power");
    if (r.omega > 0.0) distinct.insert(r.omega);
  }
  if (distinct.size() < 3)
    throw FitError("motor fit: rank-deficient design, need at least 3 distinct nonzero speeds (got " +
                   std::to_string(distinct.size()) + ")");
  if (log.rows.size() < kMinThrustRows)
    throw FitError("motor fit: need at least " + std::to_string(kMinThrustRows) + " rows (got " +
                   std::to_string(log.rows.size()) + ")");

  MotorFit fit{};
  // Stage 1: Q = c_d w^2, closed form.
  double num = 0.0, den = 0.0;
  for (const auto& r : log.rows) {
    const double w2 = r.omega * r.omega;
    num += r.torque * w2;
    den += w2 * w2;
  }
  fit.coeffs.c_d = num / den;
  if (!(fit.coeffs.c_d > 0.0)) throw FitError("motor fit: non-positive drag coefficient");
  std::vector<double> q_res;
  q_res.reserve(log.rows.size());
  for (const auto& r : log.rows) q_res.push_back(r.torque - drag_torque(fit.coeffs, r.omega));
  fit.torque_rmse = rmse_of(q_res);

  // Stage 2: P = m0 w + m1 w^3 + m2 w^6 with nonnegativity by projection.
  const auto n = static_cast<Eigen::Index>(log.rows.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = log.rows[static_cast<std::size_t>(i)].omega;
    const double w3 = w * w * w;
    design(i, 0) = w;
    design(i, 1) = w3;
    design(i, 2) = w3 * w3;
    rhs(i) = log.rows[static_cast<std::size_t>(i)].power;
  }
  static constexpr std::array<const char*, 3> kNames{"m0", "m1", "m2"};
  std::vector<int> active{0, 1, 2};
  std::array<double, 3> m{0.0, 0.0, 0.0};
  for (;;) {
    const Eigen::VectorXd x = solve_scaled(design, rhs, active);
    Eigen::Index worst = -1;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (x(j) < 0.0 && (worst < 0 || x(j) < x(worst))) worst = j;
    if (worst < 0) {
      m = {0.0, 0.0, 0.0};
      for (std::size_t j = 0; j < active.size(); ++j)
        m[static_cast<std::size_t>(active[j])] = x(static_cast<Eigen::Index>(j));
      break;
    }
    const int dropped = active[static_cast<std::size_t>(worst)];
    fit.report.warnings.push_back(std::string("negative ") + kNames[static_cast<std::size_t>(dropped)] +
                                  " clamped to 0 and remaining terms refit");
    active.erase(active.begin() + worst);
    if (active.empty()) throw FitError("motor fit: all loss terms negative");
  }
  fit.coeffs.m0 = m[0];
  fit.coeffs.m1 = m[1];
  fit.coeffs.m2 = m[2];
  if (!(fit.coeffs.m1 > 0.0)) throw FitError("motor fit: cubic loss term m1 not positive");

  fit.report.residuals.reserve(log.rows.size());
  for (const auto& r : log.rows)
    fit.report.residuals.push_back(r.power - modelled_electrical_power(fit.coeffs, r.omega));
  fit.report.rmse = rmse_of(fit.report.residuals);
  fit.report.coefficients = {{"c_d", fit.coeffs.c_d},
                             {"m0", fit.coeffs.m0},
                             {"m1", fit.coeffs.m1},
                             {"m2", fit.coeffs.m2}};

  const double w_lo = *distinct.begin();
  const double w_hi = *distinct.rbegin();
  double peak = 0.0;
  double peak_w = w_lo;
  constexpr int kGrid = 1000;
  for (int i = 0; i <= kGrid; ++i) {
    const double w = w_lo + (w_hi - w_lo) * i / kGrid;
    const double eta = efficiency(fit.coeffs, w);
    if (eta > peak) {
      peak = eta;
      peak_w = w;
    }
  }
  if (peak > 1.0) {
    std::ostringstream msg;
    msg << "fitted efficiency exceeds 1 (" << peak << " at " << peak_w << " rad/s)";
    fit.report.warnings.push_back(msg.str());
  }
  return fit;
}

// ---- battery: steps and resistance ------------------------------------------

std::vector<std::size_t> detect_steps(const std::vector<DischargeSample>& rows, double threshold) {
  std::vector<std::size_t> steps;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = rows[i - 1].pack_power;
    const double diff = std::abs(rows[i].pack_power - prev);
    if (prev == 0.0 ? diff > 0.0 : diff > threshold * std::abs(prev)) steps.push_back(i);
  }
  return steps;
}

DischargeLog make_discharge_log(const BatteryPack& pack, std::vector<DischargeSample> rows) {
  if (rows.empty()) throw InputError("discharge log: no rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!std::isfinite(r.time) || !std::isfinite(r.pack_power) || !std::isfinite(r.pack_voltage))
      throw InputError("discharge log: non-finite value in row " + std::to_string(i + 1));
    if (r.pack_power < 0.0)
      throw InputError("discharge log: negative power in row " + std::to_string(i + 1));
    if (i > 0 && !(r.time > rows[i - 1].time))
      throw InputError("discharge log: time must be strictly increasing (row " +
                       std::to_string(i + 1) + ")");
  }
  if (rows.front().time < 0.0) throw InputError("discharge log: negative start time");
  DischargeLog log{pack, std::move(rows), {}};
  log.step_indices = detect_steps(log.rows);
  return log;
}

namespace {

// Running per-cell mean power at each row time, zero-order hold between rows.
std::vector<double> running_avg_power(const DischargeLog& log) {
  const double norm = log.pack.cell_count() * log.pack.cell_capacity_ah();
  const double t0 = log.rows.front().time;
  std::vector<double> avg(log.rows.size());
  double energy = 0.0;  // W/Ah * s
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const double t = log.rows[i].time - t0;
    if (i > 0) energy += log.rows[i - 1].pack_power / norm * (log.rows[i].time - log.rows[i - 1].time);
    avg[i] = t > 0.0 ? energy / t : log.rows[i].pack_power / norm;
  }
  return avg;
}

}  // namespace

std::vector<StepResistance> extract_step_resistances(const DischargeLog& log, std::size_t log_index,
                                                     std::vector<std::string>& warnings) {
  const auto avg = running_avg_power(log);
  const double ns = log.pack.series_count();
  const double np = log.pack.parallel_count();
  const double c_cell = log.pack.cell_capacity_ah();
  std::vector<StepResistance> out;
  for (std::size_t i : log.step_indices) {
    const auto& before = log.rows[i - 1];
    const auto& after = log.rows[i];
    const double du = after.pack_voltage / ns - before.pack_voltage / ns;
    // per-cell current per Ah of cell capacity
    const double i_before = before.pack_power / (before.pack_voltage * np) / c_cell;
    const double i_after = after.pack_power / (after.pack_voltage * np) / c_cell;
    const double di = i_after - i_before;
    const double r = -du / di;
    if (du == 0.0 || di == 0.0 || !(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream msg;
      msg << "log " << log_index << ": step at row " << i << " (t=" << after.time
          << " s) excluded, " << (du == 0.0 ? "zero voltage jump" : "non-physical jump");
      warnings.push_back(msg.str());
      continue;
    }
    out.push_back({log_index, i, after.time, avg[i], c_cell, r});
  }
  return out;
}

ResistanceFit fit_battery_resistance(const std::vector<DischargeLog>& logs) {
  ResistanceFit fit{};
  std::size_t raw_steps = 0;
  for (std::size_t li = 0; li < logs.size(); ++li) {
    raw_steps += logs[li].step_indices.size();
    auto s = extract_step_resistances(logs[li], li, fit.report.warnings);
    fit.steps.insert(fit.steps.end(), s.begin(), s.end());
  }
  if (raw_steps == 0) throw FitError("battery resistance fit: no power steps found in logs");
  if (fit.steps.size() < 3)
    throw FitError("battery resistance fit: need at least 3 usable steps (got " +
                   std::to_string(fit.steps.size()) + ")");

  const auto n = static_cast<Eigen::Index>(fit.steps.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = fit.steps[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = s.avg_power;
    design(i, 2) = s.cell_capacity;
    rhs(i) = s.resistance;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3)
    throw FitError(
        "battery resistance fit: steps do not span average power and cell capacity "
        "(need logs with at least two distinct cell capacities)");
  const Eigen::VectorXd b = qr.solve(rhs);
  fit.b0 = b(0);
  fit.b1 = b(1);
  fit.b2 = b(2);

  // Smallest observed R, but never above what the linear model itself predicts
  // anywhere inside the logged operating range.
  double r_min = std::numeric_limits<double>::infinity();
  for (const auto& s : fit.steps) r_min = std::min(r_min, s.resistance);
  for (const auto& log : logs) {
    const double c_cell = log.pack.cell_capacity_ah();
    for (double p : running_avg_power(log)) r_min = std::min(r_min, fit.b0 + fit.b1 * p + fit.b2 * c_cell);
  }
  fit.r_min = std::max(r_min, kResistanceFloor);

  fit.report.residuals.reserve(fit.steps.size());
  for (const auto& s : fit.steps)
    fit.report.residuals.push_back(s.resistance -
                                   (fit.b0 + fit.b1 * s.avg_power + fit.b2 * s.cell_capacity));
  fit.report.rmse = rmse_of(fit.report.residuals);
  fit.report.coefficients = {{"b0", fit.b0}, {"b1", fit.b1}, {"b2", fit.b2}, {"r_min", fit.r_min}};
  return fit;
}

// ---- battery: dynamics -------------------------------------------------------

std::vector<double> replay_log(const DischargeLog& log, const BatteryParams& params, double max_dt) {
  const double norm = log.pack.cell_count() * log.pack.cell_capacity_ah();
  const double c_cell = log.pack.cell_capacity_ah();
  const double t0 = log.rows.front().time;
  std::vector<double> out;
  out.reserve(log.rows.size());
  BatteryState state;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const double p_cell = log.rows[i].pack_power / norm;
    out.push_back(cell_voltage(state, p_cell, c_cell, params));
    if (i + 1 == log.rows.size()) break;
    const double span = (log.rows[i + 1].time - t0) - state.time;
    const int substeps = std::max(1, static_cast<int>(std::ceil(span / max_dt - 1e-9)));
    const double h = span / substeps;
    for (int s = 0; s < substeps; ++s) state = advance_state(state, p_cell, h, params);
  }
  return out;
}

namespace {

void append_residuals(const DischargeLog& log, const BatteryParams& params, double max_dt,
                      std::vector<double>& out) {
  const auto predicted = replay_log(log, params, max_dt);
  const double ns = log.pack.series_count();
  for (std::size_t i = 0; i < predicted.size(); ++i)
    out.push_back(predicted[i] - log.rows[i].pack_voltage / ns);
}

}  // namespace

std::vector<double> voltage_residuals_serial(const std::vector<DischargeLog>& logs,
                                             const BatteryParams& params, double max_dt) {
  std::vector<double> out;
  for (const auto& log : logs) append_residuals(log, params, max_dt, out);
  return out;
}

std::vector<double> voltage_residuals(const std::vector<DischargeLog>& logs,
                                      const BatteryParams& params, double max_dt) {
  const auto count = static_cast<long>(logs.size());
  std::vector<std::vector<double>> parts(logs.size());
  std::vector<std::exception_ptr> errors(logs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      append_residuals(logs[idx], params, max_dt, parts[idx]);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

namespace {

constexpr int kDynamicsParams = 6;  // a0..a3, k, tau_rc

Eigen::VectorXd pack_dynamics(const BatteryParams& p) {
  Eigen::VectorXd x(kDynamicsParams);
  x << p.a0, p.a1, p.a2, p.a3, p.k, p.tau_rc;
  return x;
}

BatteryParams unpack_dynamics(const Eigen::VectorXd& x, BatteryParams base) {
  base.a0 = x(0);
  base.a1 = x(1);
  base.a2 = x(2);
  base.a3 = x(3);
  base.k = x(4);
  base.tau_rc = x(5);
  return base;
}

bool admissible(const BatteryParams& p) {
  return p.tau_rc > 0.0 && p.a0 >= 3.0 && p.a0 <= 4.4;
}

// Residuals or an empty vector when the parameters are outside the model domain.
std::vector<double> try_residuals(const std::vector<DischargeLog>& logs, const BatteryParams& p,
                                  double max_dt) {
  if (!admissible(p)) return {};
  try {
    auto r = voltage_residuals(logs, p, max_dt);
    for (double v : r)
      if (!std::isfinite(v)) return {};
    return r;
  } catch (const InfeasiblePower&) {
    return {};
  }
}

std::vector<double> to_vector(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

}  // namespace

DynamicsFit fit_battery_dynamics(const std::vector<DischargeLog>& logs,
                                 const ResistanceFit& resistance,
                                 const DynamicsFitOptions& options) {
  if (logs.empty()) throw FitError("battery dynamics fit: no logs");
  BatteryParams base = options.use_initial_guess ? options.initial_guess : builtin_battery_params();
  base.b0 = resistance.b0;
  base.b1 = resistance.b1;
  base.b2 = resistance.b2;
  base.r_min = resistance.r_min;

  // Work in variables scaled by the starting magnitudes.
  const Eigen::VectorXd x0 = pack_dynamics(base);
  Eigen::VectorXd scale = x0.cwiseAbs();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const auto params_of = [&](const Eigen::VectorXd& z) {
    return unpack_dynamics(z.cwiseProduct(scale), base);
  };

  Eigen::VectorXd z = x0.cwiseQuotient(scale);
  std::vector<double> r = try_residuals(logs, params_of(z), options.max_dt);
  if (r.empty()) throw FitError("battery dynamics fit: non-finite objective at start", to_vector(x0));
  const auto m = static_cast<Eigen::Index>(r.size());

  DynamicsFit fit{};
  double cost = rmse_of(r);
  fit.objective_history.push_back(cost);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = false;
  for (; !converged && iter < options.max_iterations && cost > 1e-12; ++iter) {
    // Forward-difference Jacobian; columns are independent simulations.
    Eigen::MatrixXd jac(m, kDynamicsParams);
    std::vector<std::vector<double>> cols(kDynamicsParams);
    std::vector<double> steps(kDynamicsParams);
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < kDynamicsParams; ++j) {
      Eigen::VectorXd zp = z;
      const double h = 1e-7 * std::max(std::abs(z(j)), 1.0);
      zp(j) += h;
      steps[static_cast<std::size_t>(j)] = h;
      cols[static_cast<std::size_t>(j)] = try_residuals(logs, params_of(zp), options.max_dt);
    }
    for (int j = 0; j < kDynamicsParams; ++j) {
      const auto& c = cols[static_cast<std::size_t>(j)];
      if (c.empty()) throw FitError("battery dynamics fit: non-finite objective in Jacobian",
                                    to_vector(z.cwiseProduct(scale)));
      for (Eigen::Index i = 0; i < m; ++i)
        jac(i, j) = (c[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)]) /
                    steps[static_cast<std::size_t>(j)];
    }
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), m);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * rv;

    bool accepted = false;
    while (!accepted && lambda < 1e16) {
      Eigen::MatrixXd lhs = jtj;
      for (int j = 0; j < kDynamicsParams; ++j)
        lhs(j, j) += lambda * std::max(jtj(j, j), 1e-12);
      const Eigen::VectorXd delta = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd trial = z + delta;
      auto rt = try_residuals(logs, params_of(trial), options.max_dt);
      const double trial_cost = rt.empty() ? std::numeric_limits<double>::infinity() : rmse_of(rt);
      if (trial_cost < cost) {
        accepted = true;
        const double rel = (cost - trial_cost) / cost;
        z = trial;
        r = std::move(rt);
        cost = trial_cost;
        fit.objective_history.push_back(cost);
        lambda = std::max(lambda / 3.0, 1e-12);
        converged = rel < options.relative_tolerance;
      } else {
        lambda *= 4.0;
      }
    }
    // No descent direction left at machine precision.
    if (!accepted) converged = true;
  }
  fit.params = params_of(z);
  fit.report.residuals = std::move(r);
  fit.report.rmse = rmse_of(fit.report.residuals);
  fit.report.iterations = iter;
  if (!converged && cost > 1e-12)
    fit.report.warnings.push_back("iteration limit reached before convergence");
  fit.report.coefficients = {{"a0", fit.params.a0},   {"a1", fit.params.a1},
                             {"a2", fit.params.a2},   {"a3", fit.params.a3},
                             {"k", fit.params.k},     {"tau_rc", fit.params.tau_rc}};
  return fit;
}

}  // namespace mrange
