#include "mifb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "mifb/errors.hpp"

namespace mifb {

namespace {

constexpr double kMuNuGrid[] = {0.01, 0.05, 0.1, 0.2, 0.4};

void validate_shape(const MifbParams& p) {
  if (p.s < 1) throw std::invalid_argument("mifb: inertia depth s must be >= 1");
  if (!p.gamma) throw std::invalid_argument("mifb: gamma schedule is unset");
  if (!p.a || !p.b) throw std::invalid_argument("mifb: inertia schedules are unset");
}

// delta for fixed mu, nu; also fills beta_inf / alpha_sup.
void evaluate_margin(const MifbParams& p, double L, int horizon, double mu,
                     double nu, AdmissibilityReport& out) {
  const int last_k = p.constant_in_k ? 1 : horizon;
  double beta_inf = kInf;
  std::vector<double> alpha_sup(p.s, -kInf);
  for (int k = 1; k <= last_k; ++k) {
    const double g = p.gamma(k);
    if (!(g > 0.0) || !(g < 1.0 / L)) {
      throw std::invalid_argument("mifb: gamma at k=" + std::to_string(k) +
                                  " is outside (0, 1/L)");
    }
    beta_inf = std::min(beta_inf, (1.0 - g * L - mu - nu * g) / (2.0 * g));
    for (int i = 0; i < p.s; ++i) {
      const double ai = p.a(k, i);
      const double bi = p.b(k, i);
      if (ai <= -1.0 || ai > 1.0 || bi <= -1.0 || bi > 1.0) {
        throw std::invalid_argument("mifb: inertia coefficient at k=" +
                                    std::to_string(k) + " is outside (-1, 1]");
      }
      const double alpha = p.s * ai * ai / (2.0 * g * mu) +
                           p.s * bi * bi * L * L / (2.0 * nu);
      alpha_sup[i] = std::max(alpha_sup[i], alpha);
    }
  }
  double sum = 0.0;
  for (double a : alpha_sup) sum += a;
  out.beta_inf = beta_inf;
  out.alpha_sup = std::move(alpha_sup);
  out.delta = beta_inf - sum;
  out.admissible = out.delta > 0.0;
  out.mu = mu;
  out.nu = nu;
}

}  // namespace

MifbParams make_constant_params(int s, double gamma, std::vector<double> a,
                                std::vector<double> b) {
  if (s < 1) throw std::invalid_argument("mifb: s must be >= 1");
  if (static_cast<int>(a.size()) != s || static_cast<int>(b.size()) != s) {
    throw std::invalid_argument("mifb: inertia vectors must have length s");
  }
  MifbParams p;
  p.s = s;
  p.gamma = [gamma](int) { return gamma; };
  p.a = [a = std::move(a)](int, int i) { return a[i]; };
  p.b = [b = std::move(b)](int, int i) { return b[i]; };
  p.constant_in_k = true;
  return p;
}

MifbParams preset(const std::string& name, double a0, double a1) {
  if (name == "none") return make_constant_params(1, 0.0, {0.0}, {0.0});
  if (name == "heavy-ball" || name == "ipiano")
    return make_constant_params(1, 0.0, {a0}, {0.0});
  if (name == "ifb-equal") return make_constant_params(1, 0.0, {a0}, {a0});
  if (name == "two-step") return make_constant_params(2, 0.0, {a0, a1}, {a0, a1});
  throw std::invalid_argument(
      "unknown preset \"" + name +
      "\"; valid presets: none, heavy-ball, ipiano, ifb-equal, two-step");
}

AdmissibilityReport compute_admissibility(const MifbParams& params, double L,
                                          int horizon) {
  validate_shape(params);
  if (horizon < 1) throw std::invalid_argument("mifb: horizon must be >= 1");
  AdmissibilityReport report;
  if (params.mu && params.nu) {
    if (*params.mu <= 0.0 || *params.nu <= 0.0) {
      throw std::invalid_argument("mifb: mu and nu must be positive");
    }
    evaluate_margin(params, L, horizon, *params.mu, *params.nu, report);
    return report;
  }
  // Grid-search the free constants for the largest margin.
  std::vector<double> mus(std::begin(kMuNuGrid), std::end(kMuNuGrid));
  std::vector<double> nus = mus;
  if (params.mu) mus = {*params.mu};
  if (params.nu) nus = {*params.nu};
  bool first = true;
  for (double mu : mus) {
    for (double nu : nus) {
      AdmissibilityReport cand;
      evaluate_margin(params, L, horizon, mu, nu, cand);
      if (first || cand.delta > report.delta) {
        report = std::move(cand);
        first = false;
      }
    }
  }
  return report;
}

SolverState SolverState::initial(const Vector& x0, int s) {
  SolverState st;
  st.history.assign(static_cast<size_t>(s) + 1, x0);
  st.deltas.assign(static_cast<size_t>(s), 0.0);
  st.k = 0;
  return st;
}

IterateRecord mifb_step(const CompositeProblem& problem, const MifbParams& params,
                        SolverState& state) {
  const int k = state.k + 1;
  const double gamma = params.gamma(k);
  const Vector& xk = state.history.front();
  Vector ya = xk;
  Vector yb = xk;
  for (int i = 0; i < params.s; ++i) {
    const Vector diff = state.history[i] - state.history[i + 1];
    ya += params.a(k, i) * diff;
    yb += params.b(k, i) * diff;
  }
  const Vector grad = problem.f.gradient(yb);
  if (!grad.allFinite()) {
    throw numerical_error("mifb: non-finite gradient at iteration " +
                          std::to_string(k));
  }
  Vector next = problem.g.prox(ya - gamma * grad, gamma);
  if (!next.allFinite()) {
    throw numerical_error("mifb: non-finite prox output at iteration " +
                          std::to_string(k));
  }

  IterateRecord rec;
  rec.delta_x = (next - xk).norm();
  rec.phi = objective_value(problem, next);
  rec.x = next;

  state.history.pop_back();
  state.history.push_front(std::move(next));
  state.deltas.pop_back();
  state.deltas.push_front(rec.delta_x);
  state.k = k;
  return rec;
}

SolveTrace solve(const CompositeProblem& problem, const MifbParams& params,
                 const Vector& x0) {
  validate_shape(params);
  if (x0.size() != problem.f.dim) {
    throw std::invalid_argument("solve: x0 has length " +
                                std::to_string(x0.size()) + ", problem dim is " +
                                std::to_string(problem.f.dim));
  }
  SolveTrace trace;
  const int horizon = params.constant_in_k ? 1 : params.max_iters;
  trace.admissibility = compute_admissibility(params, problem.f.lipschitz, horizon);
  if (!trace.admissibility.admissible && !params.force) {
    throw inadmissible_error("solve: delta = " +
                             std::to_string(trace.admissibility.delta) +
                             " <= 0; pass force to run anyway");
  }

  // Lyapunov weights c_i = sum_{j>=i} alpha_sup_j.
  std::vector<double> weights(params.s, 0.0);
  {
    double acc = 0.0;
    for (int i = params.s - 1; i >= 0; --i) {
      acc += trace.admissibility.alpha_sup[i];
      weights[i] = acc;
    }
  }

  SolverState state = SolverState::initial(x0, params.s);
  const auto psi_of = [&](double phi) {
    double v = phi;
    for (int i = 0; i < params.s; ++i) {
      v += weights[i] * state.deltas[i] * state.deltas[i];
    }
    return v;
  };

  const double phi0 = objective_value(problem, x0);
  trace.phi.push_back(phi0);
  trace.delta_x.push_back(0.0);
  trace.psi.push_back(psi_of(phi0));
  if (params.store_every > 0) {
    trace.iterates.push_back(x0);
    trace.iterate_index.push_back(0);
  }

  trace.reason = StopReason::max_iters;
  while (state.k < params.max_iters) {
    IterateRecord rec;
    try {
      rec = mifb_step(problem, params, state);
    } catch (const numerical_error&) {
      trace.reason = StopReason::numerical_failure;
      break;
    }
    trace.phi.push_back(rec.phi);
    trace.delta_x.push_back(rec.delta_x);
    trace.psi.push_back(psi_of(rec.phi));
    if (params.store_every > 0 && state.k % params.store_every == 0) {
      trace.iterates.push_back(rec.x);
      trace.iterate_index.push_back(state.k);
    }
    if (rec.delta_x <= params.tol_delta_x) {
      trace.reason = StopReason::tolerance;
      break;
    }
  }
  trace.iterations = state.k;
  trace.x_final = state.history.front();
  if (params.store_every > 0 &&
      (trace.iterate_index.empty() || trace.iterate_index.back() != state.k)) {
    trace.iterates.push_back(trace.x_final);
    trace.iterate_index.push_back(state.k);
  }
  return trace;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iters: return "max_iters";
    case StopReason::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace mifb
