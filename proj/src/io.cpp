#include "klat/io.hpp"

#include <fstream>
#include <sstream>

#include "klat/errors.hpp"

namespace klat::io {

namespace {

const json& require_field(const json& j, const char* name, const char* context) {
  if (!j.is_object() || !j.contains(name)) {
    throw SchemaError(std::string(context) + ": missing field \"" + name + "\"");
  }
  return j.at(name);
}

int require_int(const json& j, const char* name, const char* context) {
  const json& v = require_field(j, name, context);
  if (!v.is_number_integer()) {
    throw SchemaError(std::string(context) + ": field \"" + name +
                      "\" must be an integer");
  }
  return v.get<int>();
}

double require_number(const json& j, const char* name, const char* context) {
  const json& v = require_field(j, name, context);
  if (!v.is_number()) {
    throw SchemaError(std::string(context) + ": field \"" + name +
                      "\" must be a number");
  }
  return v.get<double>();
}

std::vector<double> number_array(const json& v, const char* field, const char* context) {
  if (!v.is_array()) {
    throw SchemaError(std::string(context) + ": field \"" + field +
                      "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) {
      throw SchemaError(std::string(context) + ": field \"" + field +
                        "\" must contain numbers only");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

json space_to_json(const StateSpace& space) {
  json j;
  switch (space.kind()) {
    case TopologyKind::discrete:
      j["kind"] = "discrete";
      j["n"] = space.size();
      break;
    case TopologyKind::interval:
      j["kind"] = "interval";
      j["n"] = space.size();
      j["a"] = space.lower();
      j["b"] = space.upper();
      break;
    case TopologyKind::two_sided_sequence:
      j["kind"] = "two_sided_seq";
      j["N"] = space.truncation();
      break;
  }
  return j;
}

SpacePtr space_from_json(const json& j) {
  const json& kind_field = require_field(j, "kind", "space");
  if (!kind_field.is_string()) throw SchemaError("space: field \"kind\" must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "discrete") return make_discrete_space(require_int(j, "n", "space"));
  if (kind == "interval") {
    return make_interval_space(require_number(j, "a", "space"),
                               require_number(j, "b", "space"),
                               require_int(j, "n", "space"));
  }
  if (kind == "two_sided_seq") return make_sequence_space(require_int(j, "N", "space"));
  throw SchemaError("space: unknown kind \"" + kind + "\"");
}

json measure_to_json(const SignedMeasure& mu) {
  json j;
  j["space"] = space_to_json(*mu.space());
  j["weights"] = mu.weights();
  return j;
}

SignedMeasure measure_from_json(const json& j) {
  SpacePtr space = space_from_json(require_field(j, "space", "measure"));
  std::vector<double> weights =
      number_array(require_field(j, "weights", "measure"), "weights", "measure");
  if (static_cast<int>(weights.size()) != space->size()) {
    throw SchemaError("measure: field \"weights\" has " +
                      std::to_string(weights.size()) + " entries for a carrier of " +
                      std::to_string(space->size()));
  }
  return SignedMeasure(std::move(space), std::move(weights));
}

json function_to_json(const BoundedFunction& f) {
  json j;
  j["space"] = space_to_json(*f.space());
  j["values"] = f.values();
  return j;
}

BoundedFunction function_from_json(const json& j) {
  SpacePtr space = space_from_json(require_field(j, "space", "function"));
  std::vector<double> values =
      number_array(require_field(j, "values", "function"), "values", "function");
  if (static_cast<int>(values.size()) != space->size()) {
    throw SchemaError("function: field \"values\" has " +
                      std::to_string(values.size()) + " entries for a carrier of " +
                      std::to_string(space->size()));
  }
  return BoundedFunction(std::move(space), std::move(values));
}

json kernel_to_json(const TransitionKernel& k) {
  json j;
  j["space"] = space_to_json(*k.space());
  json rows = json::array();
  for (int x = 0; x < k.size(); ++x) {
    rows.push_back(k.row(x).weights());
  }
  j["rows"] = std::move(rows);
  return j;
}

TransitionKernel kernel_from_json(const json& j) {
  SpacePtr space = space_from_json(require_field(j, "space", "kernel"));
  const int n = space->size();
  const json& rows = require_field(j, "rows", "kernel");
  if (!rows.is_array() || rows.empty()) {
    throw SchemaError("kernel: field \"rows\" must be a nonempty array");
  }
  std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
  if (rows.front().is_array()) {
    if (static_cast<int>(rows.size()) != n) {
      throw SchemaError("kernel: field \"rows\" has " + std::to_string(rows.size()) +
                        " rows for a carrier of " + std::to_string(n));
    }
    for (int x = 0; x < n; ++x) {
      const std::vector<double> row = number_array(rows.at(x), "rows", "kernel");
      if (static_cast<int>(row.size()) != n) {
        throw SchemaError("kernel: row " + std::to_string(x) + " has " +
                          std::to_string(row.size()) + " entries, expected " +
                          std::to_string(n));
      }
      std::copy(row.begin(), row.end(), entries.begin() + static_cast<std::size_t>(x) * n);
    }
  } else {
    std::vector<bool> seen(n, false);
    for (const json& row : rows) {
      const int from = require_int(row, "from", "kernel sparse row");
      if (from < 0 || from >= n) {
        throw SchemaError("kernel: field \"from\" = " + std::to_string(from) +
                          " outside the carrier");
      }
      if (seen[from]) {
        throw SchemaError("kernel: duplicate sparse row for state " +
                          std::to_string(from));
      }
      seen[from] = true;
      const json& row_entries = require_field(row, "entries", "kernel sparse row");
      if (!row_entries.is_array()) {
        throw SchemaError("kernel: field \"entries\" must be an array");
      }
      for (const json& cell : row_entries) {
        const int to = require_int(cell, "to", "kernel sparse entry");
        if (to < 0 || to >= n) {
          throw SchemaError("kernel: field \"to\" = " + std::to_string(to) +
                            " outside the carrier");
        }
        entries[static_cast<std::size_t>(from) * n + to] +=
            require_number(cell, "w", "kernel sparse entry");
      }
    }
  }
  return TransitionKernel(std::move(space), std::move(entries));
}

json model_to_json(const SemigroupModel& model) {
  json j;
  j["variant"] =
      model.variant() == SemigroupModel::Variant::discrete ? "discrete" : "continuous";
  const int n = model.size();
  json matrix = json::array();
  for (int x = 0; x < n; ++x) {
    json row = json::array();
    for (int y = 0; y < n; ++y) {
      row.push_back(model.matrix()[static_cast<std::size_t>(x) * n + y]);
    }
    matrix.push_back(std::move(row));
  }
  j["matrix"] = std::move(matrix);
  return j;
}

SemigroupModel model_from_json(const json& j) {
  const json& variant_field = require_field(j, "variant", "model");
  if (!variant_field.is_string()) {
    throw SchemaError("model: field \"variant\" must be a string");
  }
  const std::string variant = variant_field.get<std::string>();
  const json& matrix = require_field(j, "matrix", "model");
  if (!matrix.is_array() || matrix.empty()) {
    throw SchemaError("model: field \"matrix\" must be a nonempty array of rows");
  }
  const int n = static_cast<int>(matrix.size());
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    const std::vector<double> row = number_array(matrix.at(x), "matrix", "model");
    if (static_cast<int>(row.size()) != n) {
      throw SchemaError("model: matrix row " + std::to_string(x) + " has " +
                        std::to_string(row.size()) + " entries, expected " +
                        std::to_string(n));
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  SpacePtr space = make_discrete_space(n);
  try {
    if (variant == "discrete") return SemigroupModel::discrete(space, std::move(entries));
    if (variant == "continuous") {
      return SemigroupModel::continuous(space, std::move(entries));
    }
  } catch (const PreconditionError& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  throw SchemaError("model: unknown variant \"" + variant + "\"");
}

json doob_report_to_json(const DoobReport& report) {
  json checks;
  for (const DoobCheck& c : report.checks) {
    json entry;
    entry["pass"] = c.pass;
    if (c.value) entry["value"] = *c.value;
    if (!c.witness.empty()) entry["witness"] = c.witness;
    checks[c.name] = std::move(entry);
  }
  json j;
  j["checks"] = std::move(checks);
  j["all_pass"] = report.all_pass;
  j["note"] = report.note;
  return j;
}

json trace_to_json(const ConvergenceTrace& trace) {
  json points = json::array();
  for (const ConvergencePoint& p : trace.points) {
    points.push_back(json{{"t", p.t}, {"tv_distance", p.tv}});
  }
  json j;
  j["points"] = std::move(points);
  j["terminal_distance"] = trace.terminal_distance;
  if (trace.fitted_rate) j["fitted_rate"] = *trace.fitted_rate;
  j["reached_tol"] = trace.reached_tol;
  j["diverged"] = trace.diverged;
  return j;
}

json weak_continuity_to_json(const WeakContinuityReport& report) {
  json j;
  j["weakly_continuous"] = report.weakly_continuous;
  j["max_deviation"] = report.max_deviation;
  if (report.witness_index) j["witness_index"] = *report.witness_index;
  if (report.witness) j["witness"] = measure_to_json(*report.witness);
  return j;
}

json cb_invariance_to_json(const CbInvarianceReport& report) {
  json probes;
  for (const auto& [name, pass] : report.probe_results) probes[name] = pass;
  json j;
  j["invariant"] = report.invariant;
  j["probes"] = std::move(probes);
  if (!report.failing_probe.empty()) j["failing_probe"] = report.failing_probe;
  return j;
}

std::string measure_to_csv(const SignedMeasure& mu) {
  std::ostringstream os;
  os << "state,weight\n";
  for (int i = 0; i < mu.size(); ++i) {
    os << i << ',' << format_double(mu.weight(i)) << '\n';
  }
  return os.str();
}

std::string trace_to_csv(const ConvergenceTrace& trace) {
  std::ostringstream os;
  os << "t,tv_distance\n";
  for (const ConvergencePoint& p : trace.points) {
    os << format_double(p.t) << ',' << format_double(p.tv) << '\n';
  }
  return os.str();
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open \"" + path.string() + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("\"" + path.string() + "\": " + e.what());
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write \"" + path.string() + "\"");
  out << content;
}

}  // namespace klat::io
