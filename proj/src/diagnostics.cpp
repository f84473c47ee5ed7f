#include "mifb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mifb/errors.hpp"

namespace mifb {

LyapunovWeights LyapunovWeights::from_alpha_sup(std::span<const double> alpha_sup) {
  LyapunovWeights w;
  w.coeffs.resize(alpha_sup.size());
  double acc = 0.0;
  for (int i = static_cast<int>(alpha_sup.size()) - 1; i >= 0; --i) {
    acc += alpha_sup[i];
    w.coeffs[i] = acc;
  }
  return w;
}

double lyapunov_value(std::span<const double> deltas_tail, double phi_k,
                      const LyapunovWeights& weights) {
  double v = phi_k;
  for (size_t i = 0; i < weights.coeffs.size() && i < deltas_tail.size(); ++i) {
    v += weights.coeffs[i] * deltas_tail[i] * deltas_tail[i];
  }
  return v;
}

std::vector<int> check_descent(std::span<const double> psi_seq, double delta,
                               std::span<const double> delta_x_seq) {
  std::vector<int> violations;
  const size_t n = std::min(psi_seq.size(), delta_x_seq.size());
  for (size_t k = 0; k + 1 < n; ++k) {
    const double tol = 1e-9 * std::max(1.0, std::abs(psi_seq[k]));
    const double dx = delta_x_seq[k + 1];
    if (psi_seq[k + 1] > psi_seq[k] - delta * dx * dx + tol) {
      violations.push_back(static_cast<int>(k));
    }
  }
  return violations;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::finite: return "finite";
    case Regime::linear: return "linear";
    case Regime::power_law: return "power_law";
    case Regime::undetermined: return "undetermined";
  }
  return "unknown";
}

Regime regime_from_name(const std::string& name) {
  if (name == "finite") return Regime::finite;
  if (name == "linear") return Regime::linear;
  if (name == "power_law") return Regime::power_law;
  if (name == "undetermined") return Regime::undetermined;
  throw std::invalid_argument("unknown regime name: " + name);
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

RateReport fit_rate(std::span<const double> phi_gaps, double tail_fraction) {
  if (tail_fraction <= 0.0 || tail_fraction >= 1.0) {
    throw std::invalid_argument("fit_rate: tail_fraction must lie in (0, 1)");
  }
  RateReport report;

  double scale = 0.0;
  for (double g : phi_gaps) scale = std::max(scale, std::abs(g));
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, scale);

  // Usable prefix: everything before the gap collapses into roundoff.
  size_t cut = phi_gaps.size();
  for (size_t j = 0; j < phi_gaps.size(); ++j) {
    if (phi_gaps[j] <= floor) {
      cut = j;
      break;
    }
  }
  if (cut < phi_gaps.size()) {
    bool stays = true;
    for (size_t j = cut; j < phi_gaps.size(); ++j) {
      if (phi_gaps[j] > floor) {
        stays = false;
        break;
      }
    }
    if (stays) {
      report.regime = Regime::finite;
      report.r_squared = 1.0;
      return report;
    }
  }

  size_t n_tail = static_cast<size_t>(std::ceil(tail_fraction * static_cast<double>(cut)));
  if (n_tail < 10) {
    throw insufficient_data_error("fit_rate: fewer than 10 tail points");
  }
  const size_t begin = cut - n_tail;

  std::vector<double> ks(n_tail), log_ks(n_tail), log_gaps(n_tail);
  for (size_t j = 0; j < n_tail; ++j) {
    const double k = static_cast<double>(begin + j + 1);
    ks[j] = k;
    log_ks[j] = std::log(k);
    log_gaps[j] = std::log(phi_gaps[begin + j]);
  }

  const LineFit lin = fit_line(ks, log_gaps);
  const LineFit pow = fit_line(log_ks, log_gaps);
  const double q = std::exp(lin.slope);
  const bool linear_valid = q > 0.0 && q < 1.0;

  if (linear_valid && lin.r_squared >= pow.r_squared) {
    report.regime = lin.r_squared >= 0.9 ? Regime::linear : Regime::undetermined;
    report.r_squared = lin.r_squared;
    if (report.regime == Regime::linear) report.linear_factor = q;
  } else {
    report.regime = pow.r_squared >= 0.9 ? Regime::power_law : Regime::undetermined;
    report.r_squared = pow.r_squared;
    if (report.regime == Regime::power_law) report.power_exponent = pow.slope;
  }
  return report;
}

std::pair<Regime, std::optional<double>> predict_regime(double theta) {
  if (!(theta > 0.0) || theta > 1.0) {
    throw std::invalid_argument("predict_regime: theta must lie in (0, 1]");
  }
  if (theta == 1.0) return {Regime::finite, std::nullopt};
  if (theta >= 0.5) return {Regime::linear, std::nullopt};
  return {Regime::power_law, 1.0 / (2.0 * theta - 1.0)};
}

double estimate_phi_star(std::span<const double> phi_seq, int burn_iters) {
  if (burn_iters < 1) {
    throw std::invalid_argument("estimate_phi_star: burn_iters must be >= 1");
  }
  if (phi_seq.size() < static_cast<size_t>(burn_iters)) {
    throw insufficient_data_error("estimate_phi_star: sequence shorter than burn horizon");
  }
  return phi_seq[static_cast<size_t>(burn_iters) - 1];
}

}  // namespace mifb
