#ifndef MIFB_SOLVER_HPP_
#define MIFB_SOLVER_HPP_

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mifb/problem.hpp"

namespace mifb {

using GammaSchedule = std::function<double(int k)>;          // k >= 1
using InertiaSchedule = std::function<double(int k, int i)>; // i in {0,...,s-1}

/// Parameters of the multi-step inertial forward-backward iteration.
///
/// mu and nu enter only the admissibility arithmetic; when left unset they
/// are picked by a small grid search maximizing the margin delta.
struct MifbParams {
  int s = 1;
  std::optional<double> mu;
  std::optional<double> nu;
  GammaSchedule gamma;
  InertiaSchedule a;
  InertiaSchedule b;
  // True when gamma, a, b do not depend on k; limits then collapse to a
  // single evaluation.
  bool constant_in_k = true;
  int max_iters = 1000;
  double tol_delta_x = 1e-10;
  // Run even when delta <= 0 (disables the descent guarantee).
  bool force = false;
  // Keep every `store_every`-th iterate in the trace (0 = final only).
  int store_every = 1;
};

/// Constant-schedule constructor; a and b give one value per inertia index.
MifbParams make_constant_params(int s, double gamma, std::vector<double> a,
                                std::vector<double> b);

/// Named parameter shapes for the special cases of the iteration family:
///   "none"                 s=1, a=b=0
///   "heavy-ball"/"ipiano"  s=1, b=0, a0 from the caller
///   "ifb-equal"            s=1, a0=b0 from the caller
///   "two-step"             s=2, a=b=(a0,a1) from the caller
/// gamma, mu, nu are left to be filled and validated afterwards.
MifbParams preset(const std::string& name, double a0 = 0.0, double a1 = 0.0);

struct AdmissibilityReport {
  double beta_inf = 0.0;                // liminf of beta_k over the horizon
  std::vector<double> alpha_sup;        // limsup of alpha_{k,i}, one per i
  double delta = 0.0;                   // beta_inf - sum(alpha_sup)
  bool admissible = false;              // delta > 0
  double mu = 0.0, nu = 0.0;            // the constants actually used
};

/// beta_k = (1 - gamma_k L - mu - nu gamma_k) / (2 gamma_k)
/// alpha_{k,i} = s a_{k,i}^2 / (2 gamma_k mu) + s b_{k,i}^2 L^2 / (2 nu)
/// delta = min_k beta_k - sum_i max_k alpha_{k,i} over the horizon.
/// Unset mu/nu are grid-searched over {0.01, 0.05, 0.1, 0.2, 0.4}^2.
AdmissibilityReport compute_admissibility(const MifbParams& params, double L,
                                          int horizon);

/// Rolling window of the last s+1 iterates (front = newest) and the last
/// s step lengths, pre-padded with x0.
struct SolverState {
  std::deque<Vector> history;
  std::deque<double> deltas;
  int k = 0;

  static SolverState initial(const Vector& x0, int s);
};

struct IterateRecord {
  Vector x;
  double delta_x;
  double phi;
};

/// One iteration: extrapolate, gradient step at y_b, prox step anchored at
/// y_a, shift the window.
IterateRecord mifb_step(const CompositeProblem& problem, const MifbParams& params,
                        SolverState& state);

enum class StopReason { tolerance, max_iters, numerical_failure };

struct SolveTrace {
  std::vector<double> phi;       // phi[k], k = 0..K
  std::vector<double> delta_x;   // delta_x[k] = ||x_k - x_{k-1}||, delta_x[0] = 0
  std::vector<double> psi;       // Lyapunov value at z_k
  std::vector<Vector> iterates;  // thinned per store_every; always ends at x_K
  std::vector<int> iterate_index;
  Vector x_final;
  StopReason reason = StopReason::max_iters;
  int iterations = 0;
  AdmissibilityReport admissibility;
};

/// Run the iteration from x0 until ||x_k - x_{k-1}|| <= tol_delta_x or
/// max_iters. Throws inadmissible_error when delta <= 0 unless params.force.
SolveTrace solve(const CompositeProblem& problem, const MifbParams& params,
                 const Vector& x0);

const char* stop_reason_name(StopReason r);

}  // namespace mifb

#endif  // MIFB_SOLVER_HPP_
