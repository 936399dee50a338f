#include "hardylab/report.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "hardylab/errors.hpp"
#include "hardylab/format.hpp"

namespace hardylab::report {

using functionals::EvaluationReport;

namespace {

// One output row; empty strings and NaN mean "not applicable".
struct Row {
    std::string domain;
    int dim = 0;
    std::string geom_params;
    std::string family;
    std::string family_params;
    std::string functional;
    double s, beta, gamma, p, value, err_est;
    std::string prediction;
    double gap;
    std::string pass;
};

Row row_of(const EvaluationReport& r) {
    return {geometry::to_string(r.domain.kind),
            r.domain.dim,
            geometry::geometry_params_string(r.domain),
            r.family,
            r.family_params,
            r.functional,
            r.s,
            r.beta,
            r.gamma,
            r.p,
            r.value,
            r.error_estimate,
            r.prediction,
            r.gap,
            r.pass};
}

std::vector<Row> rows_of(const constants::StudyReport& study) {
    std::vector<Row> out;
    const double pred = study.spec.prediction;
    for (const auto& point : study.ladder) {
        Row row = row_of(point.report);
        row.prediction = std::isnan(pred) ? "" : format_full(pred);
        row.gap = std::isnan(pred) ? functionals::kNaN : point.value - pred;
        row.pass = study.pass ? "true" : "false";
        out.push_back(row);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string csv_number(double v) { return std::isnan(v) ? "" : format_full(v); }

nlohmann::ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::ordered_json json_string(const std::string& s) {
    if (s.empty()) return nullptr;
    return s;
}

}  // namespace

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw InvalidArgument("unknown report format: " + name);
}

const std::vector<std::string>& columns() {
    static const std::vector<std::string> cols{"domain", "dim",   "geom_params", "family", "family_params",
                                               "functional", "s", "beta",  "gamma",  "p",
                                               "value", "err_est", "prediction", "gap", "pass"};
    return cols;
}

std::string emit_report(const std::vector<Result>& results, Format format) {
    std::vector<Row> rows;
    if (!results.empty()) {
        const std::size_t kind = results.front().index();
        for (const auto& r : results) {
            if (r.index() != kind) throw InvalidArgument("cannot mix evaluation and study results in one report");
            if (const auto* e = std::get_if<EvaluationReport>(&r)) {
                rows.push_back(row_of(*e));
            } else {
                for (auto& row : rows_of(std::get<constants::StudyReport>(r))) rows.push_back(row);
            }
        }
    }

    if (format == Format::Csv) {
        std::string out;
        for (std::size_t i = 0; i < columns().size(); ++i) out += (i ? "," : "") + columns()[i];
        out += "\n";
        for (const Row& r : rows) {
            const std::vector<std::string> fields{
                csv_field(r.domain), std::to_string(r.dim), csv_field(r.geom_params), csv_field(r.family),
                csv_field(r.family_params), csv_field(r.functional), csv_number(r.s), csv_number(r.beta),
                csv_number(r.gamma), csv_number(r.p), csv_number(r.value), csv_number(r.err_est),
                csv_field(r.prediction), csv_number(r.gap), r.pass};
            for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
            out += "\n";
        }
        return out;
    }

    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["runs"] = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
        nlohmann::ordered_json j;
        j["domain"] = r.domain;
        j["dim"] = r.dim;
        j["geom_params"] = json_string(r.geom_params);
        j["family"] = json_string(r.family);
        j["family_params"] = json_string(r.family_params);
        j["functional"] = r.functional;
        j["s"] = json_number(r.s);
        j["beta"] = json_number(r.beta);
        j["gamma"] = json_number(r.gamma);
        j["p"] = json_number(r.p);
        j["value"] = json_number(r.value);
        j["err_est"] = json_number(r.err_est);
        j["prediction"] = json_string(r.prediction);
        j["gap"] = json_number(r.gap);
        if (r.pass.empty()) {
            j["pass"] = nullptr;
        } else {
            j["pass"] = r.pass == "true";
        }
        doc["runs"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot move report into place at " + path.string());
    }
}

}  // namespace hardylab::report
