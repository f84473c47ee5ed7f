#ifndef MIFB_PROX_HPP_
#define MIFB_PROX_HPP_

#include "mifb/problem.hpp"

namespace mifb {

struct ScadParams {
  double lambda;  // > 0
  double a;       // > 2; the middle branch needs a - 1 > 1
};

struct L1Params {
  double lambda;  // > 0
};

// All catalog penalties are separable; the scalar forms are exposed so the
// test oracle can sweep them directly.

/// Three-branch SCAD penalty summed over coordinates:
///   lambda|t|                                 for |t| <= lambda
///   -(t^2 - 2 a lambda |t| + lambda^2) / (2(a-1))   for lambda < |t| <= a lambda
///   (a+1) lambda^2 / 2                        for |t| > a lambda
double scad_value(const ScadParams& p, const Vector& x);
double scad_value_scalar(const ScadParams& p, double t);

/// Coordinate-wise minimizer of gamma * scad(t) + 0.5 (t - x_i)^2.
/// On a tie between branches, the larger-magnitude minimizer is returned.
Vector scad_prox(const ScadParams& p, const Vector& x, double gamma);
double scad_prox_scalar(const ScadParams& p, double x, double gamma);

/// Soft thresholding: sign(x_i) * max(|x_i| - gamma*lambda, 0).
Vector l1_prox(const L1Params& p, const Vector& x, double gamma);
double l1_prox_scalar(double lambda, double x, double gamma);

/// Hard thresholding at sqrt(2*gamma*lambda); at the tie the coordinate is kept.
Vector l0_prox(double lambda, const Vector& x, double gamma);
double l0_prox_scalar(double lambda, double x, double gamma);

/// Coordinate-wise clamp to [-radius, radius].
Vector box_projection(double radius, const Vector& x);

// NonsmoothTerm wrappers for building composite problems.
NonsmoothTerm make_scad_term(int dim, const ScadParams& p);
NonsmoothTerm make_l1_term(int dim, const L1Params& p);
NonsmoothTerm make_l0_term(int dim, double lambda);
NonsmoothTerm make_box_term(int dim, double radius);
NonsmoothTerm make_zero_term(int dim);

}  // namespace mifb

#endif  // MIFB_PROX_HPP_
