#ifndef MIFB_EXPERIMENTS_HPP_
#define MIFB_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mifb/diagnostics.hpp"
#include "mifb/problem.hpp"
#include "mifb/prox.hpp"
#include "mifb/solver.hpp"

namespace mifb {

enum class InstanceKind { poly1d, scad_ls, l1_ls };

const char* instance_kind_name(InstanceKind k);
InstanceKind instance_kind_from_name(const std::string& name);

/// Everything needed to regenerate a problem instance from a seed.
struct InstanceSpec {
  InstanceKind kind = InstanceKind::poly1d;
  uint64_t seed = 0;
  // least squares
  int m = 0, n = 0;
  int sparsity = 0;
  double noise_scale = 0.0;  // entry variance of A
  double lambda = 0.0;
  double scad_a = 0.0;       // scad_ls only
  // poly1d
  double p = 0.0;
  double radius = 0.0;
};

/// 1-D |x|^p over the box [-radius, radius]: gradient Lipschitz constant
/// p(p-1) radius^(p-2), box-indicator nonsmooth term, KL exponent 1/p.
CompositeProblem gen_poly1d(double p, double radius);

struct SparseLsInstance {
  CompositeProblem problem;
  std::shared_ptr<Matrix> A;
  Vector b;
  Vector x_true;
};

/// Seeded sparse least-squares instance: A has i.i.d. N(0, noise_scale)
/// entries, x_true has `sparsity` randomly placed standard-normal nonzeros,
/// b = A x_true. Draw order is fixed (A row-major, then support indices,
/// then nonzero values) so equal specs give identical data.
SparseLsInstance gen_sparse_ls(const InstanceSpec& spec);

/// Least-squares problem over explicitly given data (used when loading an
/// instance document that carries its matrices).
CompositeProblem make_least_squares_problem(std::shared_ptr<Matrix> A,
                                            Vector b, NonsmoothTerm g,
                                            std::optional<double> kl_exponent);

struct ParamChoice {
  std::string name;
  MifbParams params;
};

/// A set of solver runs on one instance sharing the starting point and
/// stepsize policy, isolating the effect of the inertia coefficients.
struct ComparisonRun {
  std::string suite;
  InstanceSpec spec;
  CompositeProblem problem;
  std::optional<SparseLsInstance> ls;
  Vector x0;
  // Exact limit value when known (poly1d: 0); otherwise each run's limit is
  // estimated from its own final objective value and the rate fit stops at
  // half the horizon to keep the surrogate bias out of the tail.
  std::optional<double> known_phi_star;
  double tail_fraction = 0.5;
  std::vector<ParamChoice> choices;

  // Filled by run_comparison.
  std::vector<SolveTrace> traces;
  std::vector<double> phi_star;
  std::vector<RateReport> reports;
};

/// Solve every parameter choice and attach per-run limit estimates and rate
/// reports. Runs execute on up to `threads` workers; results are identical
/// regardless of thread count.
void run_comparison(ComparisonRun& run, int threads = 1);

/// One CSV per parameter choice (columns k, phi, phi_gap, delta_x, psi) plus
/// a JSON summary. Writes are atomic (write then rename) and byte-identical
/// across reruns with equal inputs.
void export_results(const ComparisonRun& run, const std::filesystem::path& dir);

/// The built-in reproduction suites: poly-p4, poly-p18, scad-ls, l1-ls.
/// Desk-scale by default; `full` switches the least-squares instances to
/// 500x1000 with 50 nonzeros.
ComparisonRun make_builtin_suite(const std::string& name, uint64_t seed,
                                 bool full = false);

std::vector<std::string> builtin_suite_names();

}  // namespace mifb

#endif  // MIFB_EXPERIMENTS_HPP_
