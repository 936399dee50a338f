#pragma once

// CSV / JSON emission of evaluation and study results.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "hardylab/constants.hpp"
#include "hardylab/functionals.hpp"

namespace hardylab::report {

enum class Format { Csv, Json };

Format format_from_string(const std::string& name);

using Result = std::variant<functionals::EvaluationReport, constants::StudyReport>;

/// Column order shared by both formats.
const std::vector<std::string>& columns();

/// Serialises a homogeneous list of results. A study contributes one row per
/// ladder point, in ladder order. Throws InvalidArgument on mixed kinds.
std::string emit_report(const std::vector<Result>& results, Format format);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws Error when the target is not writable.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hardylab::report
