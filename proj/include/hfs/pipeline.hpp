#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hfs/analysis.hpp"
#include "hfs/manifest_io.hpp"
#include "hfs/trace_io.hpp"

namespace hfs {

// Device metrics joined with the geometry needed for class yields and the
// dimension correlations. Geometry comes from the ensemble index when the
// traces were simulated here, else from the Table-1 junction ids.
struct DeviceRecord {
    DeviceMetrics metrics;
    double L_J_um = 0.0;
    double W_c_nm = 0.0;
    bool has_geometry = false;
    std::string failure = "unknown";
};

struct AnalysisReport {
    std::vector<DeviceRecord> devices;
    AnalysisConfig config;
};

// Writes one trace CSV (plus sidecar) per junction and direction and an
// ensemble.json index. Returns the csv paths in write order.
std::vector<std::string> write_ensemble(const EnsembleResult& result,
                                        const NoiseConfig& noise, uint64_t seed,
                                        const std::string& out_dir);

struct AnalyzeDirResult {
    AnalysisReport report;
    std::vector<std::string> file_errors;
};

AnalyzeDirResult analyze_dir(const std::string& trace_dir,
                             const AnalysisConfig& config = {});

AnalysisReport analyze_pairs(const std::vector<std::pair<SweepTrace, SweepTrace>>& pairs,
                             const AnalysisConfig& config = {});

std::string report_to_json(const AnalysisReport& report);
std::string metrics_to_csv(const AnalysisReport& report);

// report.json + metrics.csv
void write_report(const AnalysisReport& report, const std::string& out_dir);

// Plot-ready data from a report.json: box summaries and V_p scatter CSVs.
void write_plot_data(const std::string& report_json_path, const std::string& out_dir);

// Aggregate views used by the report writer and tests.
YieldTable yield_by_chip(const AnalysisReport& report);
YieldTable yield_by_class(const AnalysisReport& report);
std::map<std::string, std::map<std::string, BoxStats>> boxes_by_group(
    const AnalysisReport& report, bool by_chip);

}  // namespace hfs
