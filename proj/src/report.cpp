#include "reludist/report.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace reludist {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(const double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json optional_number(const std::optional<double> &v) {
    return v ? number_or_null(*v) : json(nullptr);
}

std::string escape_string(const std::string &s) {
    std::string out = "\"";
    for (const char ch : s) {
        switch (ch) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(ch)));
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out + "\"";
}

// Compact JSON with our own number rendering; object keys keep insertion order.
void write_json(const json &value, const bool exact, std::string &out) {
    switch (value.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += value.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(value.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(value.get<std::uint64_t>());
            break;
        case json::value_t::number_float: {
            const double v = value.get<double>();
            out += std::isfinite(v) ? (exact ? format_exact(v) : format_number(v)) : "null";
            break;
        }
        case json::value_t::string:
            out += escape_string(value.get<std::string>());
            break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto &item : value) {
                if (!first) {
                    out += ',';
                }
                first = false;
                write_json(item, exact, out);
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto &[key, item] : value.items()) {
                if (!first) {
                    out += ',';
                }
                first = false;
                out += escape_string(key);
                out += ':';
                write_json(item, exact, out);
            }
            out += '}';
            break;
        }
        default:
            throw std::invalid_argument("unsupported JSON value in report");
    }
}

std::string csv_cell(const json &value) {
    switch (value.type()) {
        case json::value_t::null:
            return "NA";
        case json::value_t::number_float: {
            const double v = value.get<double>();
            return std::isfinite(v) ? format_number(v) : "NA";
        }
        case json::value_t::string: {
            const auto s = value.get<std::string>();
            if (s.find_first_of(",\"\n") == std::string::npos) {
                return s;
            }
            std::string quoted = "\"";
            for (const char ch : s) {
                quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            }
            return quoted + "\"";
        }
        default: {
            std::string out;
            write_json(value, false, out);
            return out;
        }
    }
}

}  // namespace

std::string format_number(const double value) {
    if (!std::isfinite(value)) {
        return "NA";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value == 0.0 ? 0.0 : value, std::chars_format::general, 12);
    return { buf, res.ptr };
}

std::string format_exact(const double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return { buf, res.ptr };
}

std::string emit_csv(std::span<const std::string> columns, std::span<const row> rows) {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out += (c == 0 ? "" : ",") + columns[c];
    }
    out += '\n';
    for (const auto &r : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c != 0) {
                out += ',';
            }
            const auto it = r.find(columns[c]);
            out += it == r.end() ? std::string("NA") : csv_cell(*it);
        }
        out += '\n';
    }
    return out;
}

std::string emit_json(const report_document &report) {
    std::string out = "{\"config\":";
    write_json(report.config, true, out);
    out += ",\"provenance\":{\"artifact\":\"reludist\",\"version\":\"" RELUDIST_VERSION "\"}";
    out += ",\"records\":[";
    for (std::size_t k = 0; k < report.records.size(); ++k) {
        if (k != 0) {
            out += ',';
        }
        // reorder to the column order so CSV and JSON list fields identically
        json ordered = json::object();
        for (const auto &c : report.columns) {
            const auto it = report.records[k].find(c);
            ordered[c] = it == report.records[k].end() ? json(nullptr) : *it;
        }
        write_json(ordered, false, out);
    }
    out += ']';
    if (report.summary.is_object() && !report.summary.empty()) {
        out += ",\"summary\":";
        write_json(report.summary, false, out);
    }
    if (report.verdict) {
        out += ",\"verdict\":" + escape_string(*report.verdict);
    }
    out += "}\n";
    return out;
}

std::vector<std::string> sweep_columns(const sweep_kind kind) {
    switch (kind) {
        case sweep_kind::theta:
            return { "theta", "m", "trials", "mc_mean", "mc_stderr", "analytic_corrected", "analytic_original", "bound_lower",
                     "bound_upper" };
        case sweep_kind::concentration:
            return { "theta", "m", "trials", "mc_mean", "mc_stderr", "rms_deviation", "max_deviation", "analytic_corrected",
                     "analytic_original", "bound_lower", "bound_upper" };
        case sweep_kind::depth:
            return { "theta", "layers", "m", "trials", "mc_mean", "mc_stderr", "predicted_cos", "bound_lower", "bound_upper" };
    }
    return {};
}

row to_row(const sweep_record &record) {
    row r = row::object();
    r["theta"] = record.theta;
    if (record.kind == sweep_kind::depth) {
        r["layers"] = record.layers;
    }
    r["m"] = record.m;
    r["trials"] = record.trials;
    r["mc_mean"] = number_or_null(record.empirical.mean);
    r["mc_stderr"] = number_or_null(record.empirical.std_error);
    if (record.kind == sweep_kind::concentration) {
        r["rms_deviation"] = optional_number(record.rms_deviation);
        r["max_deviation"] = optional_number(record.max_deviation);
    }
    if (record.kind == sweep_kind::depth) {
        r["predicted_cos"] = number_or_null(record.analytic_corrected);
    } else {
        r["analytic_corrected"] = number_or_null(record.analytic_corrected);
        r["analytic_original"] = number_or_null(record.analytic_original);
    }
    r["bound_lower"] = number_or_null(record.bound_lower);
    r["bound_upper"] = number_or_null(record.bound_upper);
    return r;
}

std::string emit_csv(std::span<const sweep_record> records, sweep_kind kind) {
    if (!records.empty()) {
        kind = records.front().kind;
    }
    std::vector<row> rows;
    rows.reserve(records.size());
    for (const auto &rec : records) {
        if (rec.kind != kind) {
            throw std::invalid_argument("emit_csv needs records of a single sweep kind");
        }
        rows.push_back(to_row(rec));
    }
    return emit_csv(sweep_columns(kind), rows);
}

std::vector<std::string> separation_columns() {
    return { "m", "layers", "trials", "intra_pairs", "inter_pairs", "pre_mean_intra", "pre_mean_inter", "pre_min_inter",
             "pre_max_intra", "post_mean_intra", "post_mean_inter", "post_min_inter", "post_max_intra", "ratio_intra",
             "ratio_inter" };
}

row to_row(const separation_report &report) {
    row r = row::object();
    r["m"] = report.m;
    r["layers"] = report.layers;
    r["trials"] = report.trials;
    r["intra_pairs"] = report.intra_pairs;
    r["inter_pairs"] = report.inter_pairs;
    r["pre_mean_intra"] = optional_number(report.pre.mean_intra);
    r["pre_mean_inter"] = optional_number(report.pre.mean_inter);
    r["pre_min_inter"] = optional_number(report.pre.min_inter);
    r["pre_max_intra"] = optional_number(report.pre.max_intra);
    r["post_mean_intra"] = optional_number(report.post.mean_intra);
    r["post_mean_inter"] = optional_number(report.post.mean_inter);
    r["post_min_inter"] = optional_number(report.post.min_inter);
    r["post_max_intra"] = optional_number(report.post.max_intra);
    r["ratio_intra"] = optional_number(report.ratio_intra);
    r["ratio_inter"] = optional_number(report.ratio_inter);
    return r;
}

}  // namespace reludist
