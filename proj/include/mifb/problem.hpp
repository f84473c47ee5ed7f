#ifndef MIFB_PROBLEM_HPP_
#define MIFB_PROBLEM_HPP_

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace mifb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smooth term of a composite objective: value, gradient, and a gradient
/// Lipschitz constant. The constant may be valid only on a box
/// [-domain_radius, domain_radius]^n; the solver keeps iterates inside it
/// via the prox, so the gradient is never evaluated outside.
struct SmoothTerm {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0.0;
  double domain_radius = kInf;
};

/// Nonsmooth term: extended-real value (+inf outside the effective domain)
/// and a proximal map returning one selected element of the prox set.
struct NonsmoothTerm {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&, double)> prox;  // (point, step gamma)
};

/// Composite objective f + g. Immutable after construction; evaluation
/// closures must be reentrant so runs can share a problem concurrently.
struct CompositeProblem {
  SmoothTerm f;
  NonsmoothTerm g;
  // User-declared KL exponent in (0, 1], used only for rate prediction.
  std::optional<double> kl_exponent;
};

/// f(x) + g(x); +inf exactly when x is outside the effective domain of g.
double objective_value(const CompositeProblem& p, const Vector& x);

/// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
double check_gradient(const SmoothTerm& t, const Vector& x, double h);

/// Largest eigenvalue of A^T A by power iteration (relative tolerance 1e-8).
/// This is the gradient Lipschitz constant of f = 0.5 ||Ax - b||^2.
double estimate_lipschitz_least_squares(const Matrix& A);

}  // namespace mifb

#endif  // MIFB_PROBLEM_HPP_
