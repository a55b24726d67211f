#pragma once

#include "reludist/estimators.hpp"
#include "reludist/experiments.hpp"

#include "json.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reludist {

// Rows are flat JSON objects with a fixed key order; the same row renders identically as a CSV
// line and as a JSON record, so both formats carry the same digits.
using row = nlohmann::ordered_json;

/// Finite doubles with 12 significant digits ("%.12g" without locale); non-finite values are absent.
[[nodiscard]] std::string format_number(double value);

/// Shortest decimal string that parses back to exactly `value`.
[[nodiscard]] std::string format_exact(double value);

/// A finished run: configuration echo, records and optional summary / verdict.
struct report_document {
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::string> columns;  ///< CSV header; also the key order of each record
    std::vector<row> records;
    nlohmann::ordered_json summary;    ///< emitted when it is a non-empty object
    std::optional<std::string> verdict;
};

/// Header line plus one line per row. Absent values render as "NA".
[[nodiscard]] std::string emit_csv(std::span<const std::string> columns, std::span<const row> rows);

/// {"config": ..., "provenance": ..., "records": [...], "summary"?: ..., "verdict"?: ...}
/// Config values keep full precision; record and summary numbers use format_number.
[[nodiscard]] std::string emit_json(const report_document &report);

[[nodiscard]] inline std::string emit_csv(const report_document &report) {
    return emit_csv(report.columns, report.records);
}

[[nodiscard]] std::vector<std::string> sweep_columns(sweep_kind kind);
[[nodiscard]] row to_row(const sweep_record &record);

/// CSV of homogeneous sweep records; an empty list yields the header of `kind`.
[[nodiscard]] std::string emit_csv(std::span<const sweep_record> records, sweep_kind kind = sweep_kind::theta);

[[nodiscard]] std::vector<std::string> separation_columns();
[[nodiscard]] row to_row(const separation_report &report);

}  // namespace reludist
