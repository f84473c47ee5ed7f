#include "mifb/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "mifb/errors.hpp"

namespace mifb {

double objective_value(const CompositeProblem& p, const Vector& x) {
  if (x.size() != p.f.dim) {
    throw std::invalid_argument("objective_value: vector has length " +
                                std::to_string(x.size()) + ", problem dim is " +
                                std::to_string(p.f.dim));
  }
  const double gv = p.g.value(x);
  if (gv == kInf) return kInf;
  return p.f.value(x) + gv;
}

double check_gradient(const SmoothTerm& t, const Vector& x, double h) {
  if (h <= 0.0) throw std::invalid_argument("check_gradient: h must be positive");
  const Vector analytic = t.gradient(x);
  double worst = 0.0;
  Vector xp = x, xm = x;
  for (int i = 0; i < t.dim; ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const double fd = (t.value(xp) - t.value(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
    const double dev = std::abs(analytic(i) - fd) / std::max(1.0, std::abs(analytic(i)));
    worst = std::max(worst, dev);
  }
  return worst;
}

double estimate_lipschitz_least_squares(const Matrix& A) {
  if (A.size() == 0 || A.norm() == 0.0) {
    throw std::invalid_argument("estimate_lipschitz_least_squares: A is zero");
  }
  const int n = static_cast<int>(A.cols());
  // Power iteration on A^T A, applied as two matvecs.
  Vector v = Vector::Ones(n);
  v.normalize();
  double lambda = 0.0;
  constexpr int kMaxIters = 100000;
  constexpr double kRelTol = 1e-8;
  for (int it = 0; it < kMaxIters; ++it) {
    Vector w = A.transpose() * (A * v);
    const double norm = w.norm();
    if (norm == 0.0) {
      // v landed in the null space; restart from a shifted direction.
      v = Vector::LinSpaced(n, 1.0, 2.0).normalized();
      continue;
    }
    const double next = v.dot(w);
    w /= norm;
    if (it > 0 && std::abs(next - lambda) <= kRelTol * std::abs(next)) {
      return next;
    }
    lambda = next;
    v = w;
  }
  throw numerical_error("estimate_lipschitz_least_squares: power iteration did not converge");
}

}  // namespace mifb
