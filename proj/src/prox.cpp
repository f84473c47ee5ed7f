#include "mifb/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace mifb {

namespace {

void validate(const ScadParams& p) {
  if (p.lambda <= 0.0) throw std::invalid_argument("scad: lambda must be positive");
  if (p.a <= 2.0) throw std::invalid_argument("scad: a must exceed 2");
}

void validate_gamma(double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("prox: gamma must be positive");
}

}  // namespace

double scad_value_scalar(const ScadParams& p, double t) {
  const double at = std::abs(t);
  const double lam = p.lambda;
  if (at <= lam) return lam * at;
  if (at <= p.a * lam) {
    return -(at * at - 2.0 * p.a * lam * at + lam * lam) / (2.0 * (p.a - 1.0));
  }
  return (p.a + 1.0) * lam * lam / 2.0;
}

double scad_value(const ScadParams& p, const Vector& x) {
  validate(p);
  double sum = 0.0;
  for (int i = 0; i < x.size(); ++i) sum += scad_value_scalar(p, x(i));
  return sum;
}

double scad_prox_scalar(const ScadParams& p, double x, double gamma) {
  if (x < 0.0) return -scad_prox_scalar(p, -x, gamma);
  const double lam = p.lambda;
  const double alam = p.a * lam;

  const auto cost = [&](double t) {
    const double d = t - x;
    return gamma * scad_value_scalar(p, t) + 0.5 * d * d;
  };

  // One stationary candidate per branch, clamped into its branch interval.
  double cands[4];
  int n = 0;
  cands[n++] = std::clamp(x - gamma * lam, 0.0, lam);
  const double slope = 1.0 - gamma / (p.a - 1.0);
  if (slope > 0.0) {
    const double t2 = ((p.a - 1.0) * x - gamma * alam) / (p.a - 1.0 - gamma);
    cands[n++] = std::clamp(t2, lam, alam);
  } else {
    // Middle branch objective is concave; minimum is at an endpoint.
    cands[n++] = lam;
    cands[n++] = alam;
  }
  cands[n++] = std::max(x, alam);

  double best = cands[0];
  double best_cost = cost(best);
  for (int i = 1; i < n; ++i) {
    const double c = cost(cands[i]);
    // Branch ties resolve to the larger magnitude.
    if (c < best_cost || (c == best_cost && std::abs(cands[i]) > std::abs(best))) {
      best = cands[i];
      best_cost = c;
    }
  }
  return best;
}

Vector scad_prox(const ScadParams& p, const Vector& x, double gamma) {
  validate(p);
  validate_gamma(gamma);
  Vector out(x.size());
  for (int i = 0; i < x.size(); ++i) out(i) = scad_prox_scalar(p, x(i), gamma);
  return out;
}

double l1_prox_scalar(double lambda, double x, double gamma) {
  const double thr = gamma * lambda;
  if (x > thr) return x - thr;
  if (x < -thr) return x + thr;
  return 0.0;
}

Vector l1_prox(const L1Params& p, const Vector& x, double gamma) {
  if (p.lambda <= 0.0) throw std::invalid_argument("l1: lambda must be positive");
  validate_gamma(gamma);
  Vector out(x.size());
  for (int i = 0; i < x.size(); ++i) out(i) = l1_prox_scalar(p.lambda, x(i), gamma);
  return out;
}

double l0_prox_scalar(double lambda, double x, double gamma) {
  const double thr = std::sqrt(2.0 * gamma * lambda);
  return std::abs(x) >= thr ? x : 0.0;  // keep rule at the tie
}

Vector l0_prox(double lambda, const Vector& x, double gamma) {
  if (lambda <= 0.0) throw std::invalid_argument("l0: lambda must be positive");
  validate_gamma(gamma);
  Vector out(x.size());
  for (int i = 0; i < x.size(); ++i) out(i) = l0_prox_scalar(lambda, x(i), gamma);
  return out;
}

Vector box_projection(double radius, const Vector& x) {
  if (radius <= 0.0) throw std::invalid_argument("box: radius must be positive");
  return x.cwiseMax(-radius).cwiseMin(radius);
}

NonsmoothTerm make_scad_term(int dim, const ScadParams& p) {
  validate(p);
  NonsmoothTerm t;
  t.dim = dim;
  t.value = [p](const Vector& x) { return scad_value(p, x); };
  t.prox = [p](const Vector& x, double gamma) { return scad_prox(p, x, gamma); };
  return t;
}

NonsmoothTerm make_l1_term(int dim, const L1Params& p) {
  NonsmoothTerm t;
  t.dim = dim;
  t.value = [p](const Vector& x) { return p.lambda * x.lpNorm<1>(); };
  t.prox = [p](const Vector& x, double gamma) { return l1_prox(p, x, gamma); };
  return t;
}

NonsmoothTerm make_l0_term(int dim, double lambda) {
  NonsmoothTerm t;
  t.dim = dim;
  t.value = [lambda](const Vector& x) {
    int nz = 0;
    for (int i = 0; i < x.size(); ++i) nz += (x(i) != 0.0);
    return lambda * nz;
  };
  t.prox = [lambda](const Vector& x, double gamma) { return l0_prox(lambda, x, gamma); };
  return t;
}

NonsmoothTerm make_box_term(int dim, double radius) {
  NonsmoothTerm t;
  t.dim = dim;
  t.value = [radius](const Vector& x) {
    return (x.cwiseAbs().maxCoeff() <= radius) ? 0.0 : kInf;
  };
  t.prox = [radius](const Vector& x, double) { return box_projection(radius, x); };
  return t;
}

NonsmoothTerm make_zero_term(int dim) {
  NonsmoothTerm t;
  t.dim = dim;
  t.value = [](const Vector&) { return 0.0; };
  t.prox = [](const Vector& x, double) { return x; };
  return t;
}

}  // namespace mifb
