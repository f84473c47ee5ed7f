#include "mifb/io.hpp"

#include <fstream>
#include <stdexcept>

namespace mifb {

namespace {

std::vector<std::vector<double>> inertia_rows(const Json& j, const char* key, int s) {
  const Json& node = j.at(key);
  std::vector<double> row;
  if (node.is_array() && !node.empty() && node[0].is_array()) {
    row = node[0].get<std::vector<double>>();
  } else {
    row = node.get<std::vector<double>>();
  }
  if (static_cast<int>(row.size()) != s) {
    throw std::invalid_argument(std::string("params: ") + key +
                                " must have s entries");
  }
  return {row};
}

}  // namespace

Json params_to_json(const MifbParams& params) {
  if (!params.constant_in_k) {
    throw std::invalid_argument("params_to_json: only constant schedules are serializable");
  }
  Json j;
  j["s"] = params.s;
  if (params.mu) j["mu"] = *params.mu;
  if (params.nu) j["nu"] = *params.nu;
  j["gamma"] = {{"type", "constant"}, {"value", params.gamma ? params.gamma(1) : 0.0}};
  std::vector<double> a(params.s), b(params.s);
  for (int i = 0; i < params.s; ++i) {
    a[i] = params.a(1, i);
    b[i] = params.b(1, i);
  }
  j["a"] = Json::array({a});
  j["b"] = Json::array({b});
  j["max_iters"] = params.max_iters;
  j["tol"] = params.tol_delta_x;
  return j;
}

MifbParams params_from_json(const Json& j) {
  const int s = j.at("s").get<int>();
  const Json& gamma = j.at("gamma");
  if (gamma.at("type").get<std::string>() != "constant") {
    throw std::invalid_argument("params: only constant gamma schedules are supported");
  }
  MifbParams p = make_constant_params(s, gamma.at("value").get<double>(),
                                      inertia_rows(j, "a", s)[0],
                                      inertia_rows(j, "b", s)[0]);
  if (j.contains("mu")) p.mu = j.at("mu").get<double>();
  if (j.contains("nu")) p.nu = j.at("nu").get<double>();
  if (j.contains("max_iters")) p.max_iters = j.at("max_iters").get<int>();
  if (j.contains("tol")) p.tol_delta_x = j.at("tol").get<double>();
  return p;
}

Json instance_spec_to_json(const InstanceSpec& spec) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = instance_kind_name(spec.kind);
  if (spec.kind == InstanceKind::poly1d) {
    j["p"] = spec.p;
    j["radius"] = spec.radius;
    return j;
  }
  j["seed"] = spec.seed;
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["sparsity"] = spec.sparsity;
  j["noise_scale"] = spec.noise_scale;
  if (spec.kind == InstanceKind::scad_ls) {
    j["reg"] = {{"type", "scad"}, {"lambda", spec.lambda}, {"a", spec.scad_a}};
  } else {
    j["reg"] = {{"type", "l1"}, {"lambda", spec.lambda}};
  }
  return j;
}

InstanceSpec instance_spec_from_json(const Json& j) {
  InstanceSpec spec;
  spec.kind = instance_kind_from_name(j.at("kind").get<std::string>());
  if (spec.kind == InstanceKind::poly1d) {
    spec.p = j.at("p").get<double>();
    spec.radius = j.at("radius").get<double>();
    return spec;
  }
  spec.seed = j.at("seed").get<uint64_t>();
  spec.m = j.at("m").get<int>();
  spec.n = j.at("n").get<int>();
  spec.sparsity = j.at("sparsity").get<int>();
  spec.noise_scale = j.at("noise_scale").get<double>();
  const Json& reg = j.at("reg");
  spec.lambda = reg.at("lambda").get<double>();
  if (spec.kind == InstanceKind::scad_ls) spec.scad_a = reg.at("a").get<double>();
  return spec;
}

namespace {

Json matrix_to_json(const Matrix& A) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw std::invalid_argument("instance: matrix A is empty");
  Matrix A(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw std::invalid_argument("instance: ragged matrix rows");
    }
    for (size_t k = 0; k < rows[i].size(); ++k) A(i, k) = rows[i][k];
  }
  return A;
}

Vector vector_from_json(const Json& j) {
  const auto vals = j.get<std::vector<double>>();
  Vector v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
  return v;
}

}  // namespace

Json instance_to_json(const InstanceSpec& spec, const SparseLsInstance& data) {
  Json j = instance_spec_to_json(spec);
  j["A"] = matrix_to_json(*data.A);
  Json b = Json::array();
  for (Eigen::Index i = 0; i < data.b.size(); ++i) b.push_back(data.b(i));
  j["b"] = std::move(b);
  Json xt = Json::array();
  for (Eigen::Index i = 0; i < data.x_true.size(); ++i) xt.push_back(data.x_true(i));
  j["x_true"] = std::move(xt);
  return j;
}

LoadedInstance instance_from_json(const Json& j) {
  LoadedInstance out;
  out.spec = instance_spec_from_json(j);
  if (out.spec.kind == InstanceKind::poly1d) {
    out.problem = gen_poly1d(out.spec.p, out.spec.radius);
    return out;
  }
  if (j.contains("A")) {
    SparseLsInstance inst;
    inst.A = std::make_shared<Matrix>(matrix_from_json(j.at("A")));
    inst.b = vector_from_json(j.at("b"));
    if (j.contains("x_true")) inst.x_true = vector_from_json(j.at("x_true"));
    NonsmoothTerm g = out.spec.kind == InstanceKind::scad_ls
                          ? make_scad_term(out.spec.n, {out.spec.lambda, out.spec.scad_a})
                          : make_l1_term(out.spec.n, {out.spec.lambda});
    inst.problem = make_least_squares_problem(inst.A, inst.b, std::move(g), 0.5);
    out.problem = inst.problem;
    out.ls = std::move(inst);
    return out;
  }
  out.ls = gen_sparse_ls(out.spec);
  out.problem = out.ls->problem;
  return out;
}

Json rate_report_to_json(const RateReport& report) {
  Json j;
  j["regime"] = regime_name(report.regime);
  if (report.linear_factor) j["linear_factor"] = *report.linear_factor;
  if (report.power_exponent) j["power_exponent"] = *report.power_exponent;
  j["r_squared"] = report.r_squared;
  if (report.predicted_regime) j["predicted_regime"] = regime_name(*report.predicted_regime);
  if (report.predicted_exponent) j["predicted_exponent"] = *report.predicted_exponent;
  return j;
}

Json admissibility_to_json(const AdmissibilityReport& report) {
  Json j;
  j["beta_inf"] = report.beta_inf;
  j["alpha_sup"] = report.alpha_sup;
  j["delta"] = report.delta;
  j["admissible"] = report.admissible;
  j["mu"] = report.mu;
  j["nu"] = report.nu;
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  Json j;
  in >> j;
  return j;
}

}  // namespace mifb
