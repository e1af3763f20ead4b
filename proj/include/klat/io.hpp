#ifndef KLAT_IO_HPP
#define KLAT_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "klat/kernel.hpp"
#include "klat/measure.hpp"
#include "klat/measure_operator.hpp"
#include "klat/semigroup.hpp"
#include "klat/state_space.hpp"

namespace klat::io {

// Stable key order so fixed inputs produce byte-identical reports.
using json = nlohmann::ordered_json;

json space_to_json(const StateSpace& space);
SpacePtr space_from_json(const json& j);

// {"space": <descriptor>, "weights": [...]}
json measure_to_json(const SignedMeasure& mu);
SignedMeasure measure_from_json(const json& j);

// {"space": <descriptor>, "values": [...]}  (mirrors the measure schema)
json function_to_json(const BoundedFunction& f);
BoundedFunction function_from_json(const json& j);

// Dense {"space": ..., "rows": [[...], ...]} emitted; sparse rows
// [{"from": i, "entries": [{"to": j, "w": v}]}] accepted too.
json kernel_to_json(const TransitionKernel& k);
TransitionKernel kernel_from_json(const json& j);

// {"variant": "discrete"|"continuous", "matrix": [[...]]}
json model_to_json(const SemigroupModel& model);
SemigroupModel model_from_json(const json& j);

json doob_report_to_json(const DoobReport& report);
json trace_to_json(const ConvergenceTrace& trace);
json weak_continuity_to_json(const WeakContinuityReport& report);
json cb_invariance_to_json(const CbInvarianceReport& report);

std::string measure_to_csv(const SignedMeasure& mu);   // "state,weight"
std::string trace_to_csv(const ConvergenceTrace& trace);  // "t,tv_distance"

json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace klat::io

#endif
