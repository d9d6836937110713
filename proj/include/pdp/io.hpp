#pragma once

#include <string>
#include <string_view>

#include "pdp/core.hpp"
#include "pdp/cqm.hpp"
#include "pdp/validator.hpp"

namespace pdp {

/// Malformed file content. The message names the offending JSON path.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr int kPlanSchemaVersion = 1;
inline constexpr int kModelSchemaVersion = 1;

/// Parses an instance file (docs/formats.md). Explicit matrices win over
/// coordinates; missing lt is 0 and missing or null ut is unbounded. Throws
/// ParseError for schema problems and InstanceCheckError when the parsed
/// instance breaks a data-model invariant.
Instance load_instance(std::string_view json_text);

std::string save_instance(const Instance& instance);

struct PlanFile {
    Plan plan;
    ValidationReport report;

    friend bool operator==(const PlanFile&, const PlanFile&) = default;
};

std::string save_plan(const Plan& plan, const ValidationReport& report);
PlanFile load_plan(std::string_view json_text);

/// Standalone report document (what `validate` prints and `solve` writes
/// next to the plan).
std::string save_report(const std::string& instance, const ValidationReport& report);

/// Model exchange format for external solvers:
/// {variables, objective:{linear, quadratic}, constraints:[{label, linear,
/// quadratic, sense, rhs}]}. Terms refer to variables by label.
std::string model_to_json(const QuadraticModel& model);
QuadraticModel model_from_json(std::string_view json_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace pdp
