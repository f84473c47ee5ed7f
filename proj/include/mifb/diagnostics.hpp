#ifndef MIFB_DIAGNOSTICS_HPP_
#define MIFB_DIAGNOSTICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mifb {

/// Weights c_i = sum_{j=i}^{s-1} alpha_sup_j multiplying the squared step
/// lengths in the Lyapunov function. Nonincreasing and nonnegative.
struct LyapunovWeights {
  std::vector<double> coeffs;

  static LyapunovWeights from_alpha_sup(std::span<const double> alpha_sup);
};

/// Psi(z_k) = phi_k + sum_i coeffs[i] * deltas_tail[i]^2, where
/// deltas_tail[i] = ||x_{k-i} - x_{k-i-1}||.
double lyapunov_value(std::span<const double> deltas_tail, double phi_k,
                      const LyapunovWeights& weights);

/// Indices k with Psi_{k+1} > Psi_k - delta * Delta_{k+1}^2 + tol, where
/// tol = 1e-9 * max(1, |Psi_k|). Sequences are iteration-aligned:
/// delta_x[k] = ||x_k - x_{k-1}||. Empty result = descent holds.
std::vector<int> check_descent(std::span<const double> psi_seq, double delta,
                               std::span<const double> delta_x_seq);

enum class Regime { finite, linear, power_law, undetermined };

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct RateReport {
  Regime regime = Regime::undetermined;
  std::optional<double> linear_factor;   // q in (0,1) when regime == linear
  std::optional<double> power_exponent;  // slope of log gap vs log k
  double r_squared = 0.0;
  std::optional<Regime> predicted_regime;
  std::optional<double> predicted_exponent;
};

/// Classify the decay of an objective-gap sequence (gaps[j] is the gap at
/// iteration j+1). Gaps at or below 100*eps*scale count as exact zeros and
/// trigger the finite regime; otherwise the tail (last tail_fraction of the
/// usable points, at least 10) is fitted against both a geometric and a
/// power-law model and the better R^2 wins; below R^2 = 0.9 the regime is
/// undetermined.
RateReport fit_rate(std::span<const double> phi_gaps, double tail_fraction);

/// Rate regime implied by a KL exponent theta in (0, 1]:
/// theta = 1 -> finite; theta in [1/2, 1) -> linear;
/// theta in (0, 1/2) -> power law with exponent 1/(2 theta - 1).
std::pair<Regime, std::optional<double>> predict_regime(double theta);

/// Limit surrogate: the objective value attained at the burn horizon.
double estimate_phi_star(std::span<const double> phi_seq, int burn_iters);

}  // namespace mifb

#endif  // MIFB_DIAGNOSTICS_HPP_
