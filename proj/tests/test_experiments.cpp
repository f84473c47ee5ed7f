#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mifb/experiments.hpp"
#include "mifb/problem.hpp"

using namespace mifb;
namespace fs = std::filesystem;

namespace {

InstanceSpec small_ls(InstanceKind kind, uint64_t seed) {
  InstanceSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  spec.m = 8;
  spec.n = 16;
  spec.sparsity = 3;
  spec.noise_scale = 1.0;
  spec.lambda = 0.1;
  spec.scad_a = 5.0;
  return spec;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen_poly1d records the right constants") {
  auto p4 = gen_poly1d(4.0, 1.0);
  CHECK(p4.f.lipschitz == doctest::Approx(12.0));
  REQUIRE(p4.kl_exponent.has_value());
  CHECK(*p4.kl_exponent == doctest::Approx(0.25));

  auto p18 = gen_poly1d(18.0, 1.0);
  CHECK(p18.f.lipschitz == doctest::Approx(306.0));
  CHECK(*p18.kl_exponent == doctest::Approx(1.0 / 18.0));

  auto p3 = gen_poly1d(3.0, 2.0);
  CHECK(p3.f.lipschitz == doctest::Approx(12.0));  // 3*2*2^(3-2)
  CHECK(*p3.kl_exponent == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS((void)gen_poly1d(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)gen_poly1d(4.0, 0.0), std::invalid_argument);
}

TEST_CASE("gen_sparse_ls is seed-deterministic") {
  const auto a = gen_sparse_ls(small_ls(InstanceKind::l1_ls, 77));
  const auto b = gen_sparse_ls(small_ls(InstanceKind::l1_ls, 77));
  CHECK((*a.A - *b.A).norm() == 0.0);
  CHECK((a.b - b.b).norm() == 0.0);
  CHECK((a.x_true - b.x_true).norm() == 0.0);

  const auto c = gen_sparse_ls(small_ls(InstanceKind::l1_ls, 78));
  CHECK((*a.A - *c.A).norm() > 0.0);
}

TEST_CASE("gen_sparse_ls instance shape") {
  const auto inst = gen_sparse_ls(small_ls(InstanceKind::scad_ls, 5));
  CHECK(inst.A->rows() == 8);
  CHECK(inst.A->cols() == 16);
  CHECK(inst.b.size() == 8);
  const int nnz = static_cast<int>((inst.x_true.array() != 0.0).count());
  CHECK(nnz == 3);
  CHECK((inst.b - *inst.A * inst.x_true).norm() == 0.0);
  REQUIRE(inst.problem.kl_exponent.has_value());
  CHECK(*inst.problem.kl_exponent == 0.5);
}

TEST_CASE("gen_sparse_ls boundary and degenerate specs") {
  auto full_support = small_ls(InstanceKind::l1_ls, 1);
  full_support.sparsity = full_support.n;
  const auto inst = gen_sparse_ls(full_support);
  CHECK((inst.x_true.array() != 0.0).count() == full_support.n);

  auto bad = small_ls(InstanceKind::l1_ls, 1);
  bad.sparsity = bad.n + 1;
  CHECK_THROWS_AS((void)gen_sparse_ls(bad), std::invalid_argument);
  bad = small_ls(InstanceKind::l1_ls, 1);
  bad.m = 0;
  CHECK_THROWS_AS((void)gen_sparse_ls(bad), std::invalid_argument);
  bad = small_ls(InstanceKind::poly1d, 1);
  CHECK_THROWS_AS((void)gen_sparse_ls(bad), std::invalid_argument);
}

TEST_CASE("instance kind names round-trip") {
  for (auto k : {InstanceKind::poly1d, InstanceKind::scad_ls, InstanceKind::l1_ls}) {
    CHECK(instance_kind_from_name(instance_kind_name(k)) == k);
  }
  CHECK_THROWS_AS((void)instance_kind_from_name("lasso"), std::invalid_argument);
}

TEST_CASE("builtin suites share the starting point across choices") {
  for (const auto& name : builtin_suite_names()) {
    auto run = make_builtin_suite(name, 42);
    REQUIRE(run.choices.size() >= 3);
    // all choices run from run.x0 by construction; check gamma consistency
    const double g0 = run.choices.front().params.gamma(1);
    for (const auto& c : run.choices) {
      CHECK(c.params.gamma(1) == g0);
      CHECK(c.params.max_iters == run.choices.front().params.max_iters);
    }
    CHECK(run.x0.size() == run.problem.f.dim);
  }
  CHECK_THROWS_AS((void)make_builtin_suite("bogus", 42), std::invalid_argument);
}

TEST_CASE("run_comparison results do not depend on thread count") {
  auto r1 = make_builtin_suite("poly-p4", 42);
  auto r2 = make_builtin_suite("poly-p4", 42);
  run_comparison(r1, 1);
  run_comparison(r2, 3);
  REQUIRE(r1.traces.size() == r2.traces.size());
  for (size_t i = 0; i < r1.traces.size(); ++i) {
    REQUIRE(r1.traces[i].phi.size() == r2.traces[i].phi.size());
    for (size_t k = 0; k < r1.traces[i].phi.size(); ++k) {
      CHECK(r1.traces[i].phi[k] == r2.traces[i].phi[k]);
    }
    CHECK(r1.phi_star[i] == r2.phi_star[i]);
    CHECK(r1.reports[i].regime == r2.reports[i].regime);
  }
}

TEST_CASE("export_results writes byte-identical artifacts on rerun") {
  const fs::path dir = fs::temp_directory_path() / "mifb_export_test";
  fs::remove_all(dir);

  auto run = make_builtin_suite("poly-p4", 42);
  run_comparison(run, 2);
  export_results(run, dir);

  const fs::path csv = dir / "poly-p4_none.csv";
  const fs::path summary = dir / "poly-p4_summary.json";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(summary));
  const std::string csv1 = slurp(csv);
  const std::string sum1 = slurp(summary);

  // header plus one row per stored iterate
  const auto rows = static_cast<size_t>(
      std::count(csv1.begin(), csv1.end(), '\n'));
  CHECK(rows == run.traces[0].phi.size() + 1);
  CHECK(csv1.rfind("k,phi,phi_gap,delta_x,psi\n", 0) == 0);

  auto again = make_builtin_suite("poly-p4", 42);
  run_comparison(again, 1);
  export_results(again, dir);
  CHECK(slurp(csv) == csv1);
  CHECK(slurp(summary) == sum1);

  fs::remove_all(dir);
}
