#pragma once

#include <filesystem>
#include <string>

#include "skewgeo/pipeline.hpp"

namespace skewgeo {

enum class ReportFormat { Json, Text };

ReportFormat parse_format(const std::string& s);

/// Sorted keys, shortest round-trip numbers, NaN as null.
std::string to_json(const VerificationReport& r);
/// One row per check: name, value, tolerance, verdict.
std::string to_text(const VerificationReport& r);

/// Throws Error when the path cannot be written.
void emit_report(const VerificationReport& r, ReportFormat format, const std::filesystem::path& path);

}  // namespace skewgeo
