#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scmdebias/errors.hpp"
#include "scmdebias/experiment.hpp"

namespace scmdebias {

using nlohmann::json;

std::string report_to_json(const ExperimentReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"method", r.method},
                        {"attribute", r.attribute},
                        {"metric", r.metric},
                        {"values", r.values},
                        {"mean", r.mean},
                        {"std", r.stddev},
                        {"ci_lo", r.ci_lower},
                        {"ci_hi", r.ci_upper},
                        {"n", r.n}});
    }
    json doc = {{"tool_version", report.tool_version},
                {"ci_method", report.ci_method},
                {"ci_level", report.ci_level},
                {"base_seed", report.base_seed},
                {"trials", report.trials},
                {"sample_size", report.sample_size},
                {"sign_convention", report.sign_convention},
                {"config", report.config_echo.empty() ? json::object() : json::parse(report.config_echo)},
                {"notes", report.notes},
                {"results", rows}};
    return doc.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
    ExperimentReport report;
    try {
        const json doc = json::parse(text);
        report.tool_version = doc.at("tool_version").get<std::string>();
        report.ci_method = doc.at("ci_method").get<std::string>();
        report.ci_level = doc.at("ci_level").get<double>();
        report.base_seed = doc.at("base_seed").get<std::uint64_t>();
        report.trials = doc.at("trials").get<std::size_t>();
        report.sample_size = doc.at("sample_size").get<std::size_t>();
        report.sign_convention = doc.at("sign_convention").get<std::string>();
        report.config_echo = doc.at("config").dump();
        report.notes = doc.at("notes").get<std::vector<std::string>>();
        for (const auto& r : doc.at("results")) {
            MetricSummary s;
            s.method = r.at("method").get<std::string>();
            s.attribute = r.at("attribute").get<std::string>();
            s.metric = r.at("metric").get<std::string>();
            s.values = r.at("values").get<std::vector<double>>();
            s.mean = r.at("mean").get<double>();
            s.stddev = r.at("std").get<double>();
            s.ci_lower = r.at("ci_lo").get<double>();
            s.ci_upper = r.at("ci_hi").get<double>();
            s.n = r.at("n").get<std::size_t>();
            report.rows.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report JSON: ") + e.what());
    }
    return report;
}

std::string report_to_tsv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "method\tattribute\tmetric\tmean\tstd\tci_lo\tci_hi\tn\n";
    out << std::setprecision(12);
    for (const auto& r : report.rows) {
        out << r.method << '\t' << r.attribute << '\t' << r.metric << '\t' << r.mean << '\t'
            << r.stddev << '\t' << r.ci_lower << '\t' << r.ci_upper << '\t' << r.n << '\n';
    }
    return out.str();
}

void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::filesystem::path& path) {
    std::string body;
    if (format == "json") {
        body = report_to_json(report);
    } else if (format == "tsv") {
        body = report_to_tsv(report);
    } else {
        throw UsageError("unknown report format '" + format + "' (expected json or tsv)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write report: " + path.string());
    out << body;
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace scmdebias
