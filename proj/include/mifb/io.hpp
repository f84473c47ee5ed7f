#ifndef MIFB_IO_HPP_
#define MIFB_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mifb/experiments.hpp"
#include "mifb/solver.hpp"

namespace mifb {

using Json = nlohmann::json;

// Parameter documents. Only constant and per-index-constant schedules are
// serializable; programmatic schedules stay library-only.
//   {"s": 1, "mu": 0.1, "nu": 0.1,
//    "gamma": {"type": "constant", "value": 0.05},
//    "a": [[0.3]], "b": [[0.3]], "max_iters": 1000, "tol": 1e-10}
Json params_to_json(const MifbParams& params);
MifbParams params_from_json(const Json& j);

// Instance documents. Generator fields always record the seed; matrices,
// when present, are dense row-major nested arrays and take precedence over
// regeneration.
Json instance_spec_to_json(const InstanceSpec& spec);
InstanceSpec instance_spec_from_json(const Json& j);

Json instance_to_json(const InstanceSpec& spec, const SparseLsInstance& data);

/// Build the problem described by an instance document: explicit matrices if
/// the document carries them, otherwise regenerated from the recorded seed.
struct LoadedInstance {
  InstanceSpec spec;
  CompositeProblem problem;
  std::optional<SparseLsInstance> ls;
};
LoadedInstance instance_from_json(const Json& j);

Json rate_report_to_json(const RateReport& report);
Json admissibility_to_json(const AdmissibilityReport& report);

/// Write-then-rename so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

Json read_json_file(const std::filesystem::path& path);

}  // namespace mifb

#endif  // MIFB_IO_HPP_
