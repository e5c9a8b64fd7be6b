#include "hfs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace hfs {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt9e(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Designed Table-1 geometry, used when traces arrive without an index.
bool table1_geometry(const std::string& junction_id, double& L_J_um, double& W_c_nm) {
    static const std::map<std::string, std::pair<double, double>> table = {
        {"J1", {1.4, 400.0}}, {"J2", {1.4, 300.0}}, {"J3", {1.4, 200.0}},
        {"J4", {1.4, 100.0}}, {"J5", {1.4, 100.0}}, {"J6", {1.4, 100.0}},
        {"J7", {1.4, 100.0}}, {"J8", {3.2, 100.0}},
    };
    auto it = table.find(junction_id);
    if (it == table.end()) return false;
    L_J_um = it->second.first;
    W_c_nm = it->second.second;
    return true;
}

std::string class_key(double L_J_um, double W_c_nm) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "L_J=%.1fum,W_c=%.0fnm", L_J_um, W_c_nm);
    return buf;
}

ordered_json box_to_json(const BoxStats& b) {
    ordered_json o;
    o["n"] = b.n;
    o["mean"] = b.mean;
    o["median"] = b.median;
    o["q1"] = b.q1;
    o["q3"] = b.q3;
    o["iqr"] = b.iqr;
    o["whisker_low"] = b.whisker_low;
    o["whisker_high"] = b.whisker_high;
    o["outliers"] = b.outliers;
    return o;
}

ordered_json yield_row_to_json(const YieldRow& r, int decimals) {
    ordered_json o;
    o["group"] = r.group_key;
    o["switching"] = r.switching_count;
    o["measured"] = r.measured_count;
    if (r.yield_percent) {
        o["yield_percent"] = *r.yield_percent;
        o["yield_percent_formatted"] = format_percent(*r.yield_percent, decimals);
    } else {
        o["yield_percent"] = nullptr;
        o["yield_percent_formatted"] = "n/a";
    }
    return o;
}

ordered_json yield_to_json(const YieldTable& t, int row_decimals, int total_decimals) {
    ordered_json o;
    o["rows"] = ordered_json::array();
    for (const auto& r : t.rows) o["rows"].push_back(yield_row_to_json(r, row_decimals));
    o["total"] = yield_row_to_json(t.total, total_decimals);
    return o;
}

}  // namespace

std::vector<std::string> write_ensemble(const EnsembleResult& result,
                                        const NoiseConfig& noise, uint64_t seed,
                                        const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<std::string> paths;
    ordered_json index;
    index["seed"] = seed;
    index["entries"] = ordered_json::array();

    std::map<std::pair<std::string, std::string>, const ChipManifest*> chip_by_id;
    for (const auto& chip : result.chips)
        for (const auto& j : chip.junctions)
            chip_by_id[{chip.chip_id, j.junction_id}] = &chip;

    // traces arrive as down/up pairs in deterministic order
    for (size_t i = 0; i + 1 < result.traces.size(); i += 2) {
        const SweepTrace& down = result.traces[i];
        const SweepTrace& up = result.traces[i + 1];
        const std::string down_file = trace_basename(down) + ".csv";
        const std::string up_file = trace_basename(up) + ".csv";
        write_trace(down, noise, (fs::path(out_dir) / down_file).string());
        write_trace(up, noise, (fs::path(out_dir) / up_file).string());
        paths.push_back((fs::path(out_dir) / down_file).string());
        paths.push_back((fs::path(out_dir) / up_file).string());

        ordered_json e;
        e["chip_id"] = down.chip_id;
        e["junction_id"] = down.junction_id;
        auto it = chip_by_id.find({down.chip_id, down.junction_id});
        if (it != chip_by_id.end()) {
            const auto& j = it->second->junction(down.junction_id);
            e["L_J_um"] = j.geometry.L_J_um;
            e["W_c_nm"] = j.geometry.W_c_nm;
            e["failure"] = to_string(j.failure);
        }
        e["down_file"] = down_file;
        e["up_file"] = up_file;
        index["entries"].push_back(e);
    }
    write_file((fs::path(out_dir) / "ensemble.json").string(), index.dump(2) + "\n");
    return paths;
}

AnalysisReport analyze_pairs(const std::vector<std::pair<SweepTrace, SweepTrace>>& pairs,
                             const AnalysisConfig& config) {
    AnalysisReport report;
    report.config = config;
    for (const auto& [down, up] : pairs) {
        DeviceRecord rec;
        rec.metrics = analyze_trace_pair(down, up, config);
        rec.has_geometry = table1_geometry(down.junction_id, rec.L_J_um, rec.W_c_nm);
        report.devices.push_back(rec);
    }
    return report;
}

AnalyzeDirResult analyze_dir(const std::string& trace_dir, const AnalysisConfig& config) {
    if (!fs::is_directory(trace_dir))
        throw ParseError("analyze: not a directory: " + trace_dir);

    AnalyzeDirResult result;
    result.report.config = config;

    struct Entry {
        std::string down_file, up_file;
        double L_J_um = 0, W_c_nm = 0;
        bool has_geometry = false;
        std::string failure = "unknown";
    };
    std::vector<Entry> entries;

    const fs::path index_path = fs::path(trace_dir) / "ensemble.json";
    if (fs::exists(index_path)) {
        ordered_json index;
        try {
            index = ordered_json::parse(read_file(index_path.string()));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("ensemble.json: " + std::string(e.what()));
        }
        for (const auto& e : index["entries"]) {
            Entry entry;
            entry.down_file = e["down_file"].get<std::string>();
            entry.up_file = e["up_file"].get<std::string>();
            if (e.contains("L_J_um") && e.contains("W_c_nm")) {
                entry.L_J_um = e["L_J_um"].get<double>();
                entry.W_c_nm = e["W_c_nm"].get<double>();
                entry.has_geometry = true;
            }
            if (e.contains("failure")) entry.failure = e["failure"].get<std::string>();
            entries.push_back(entry);
        }
    } else {
        // pair loose trace files by (chip, junction)
        std::map<std::pair<std::string, std::string>, std::map<SweepDirection, std::string>>
            found;
        std::vector<fs::path> csvs;
        for (const auto& de : fs::directory_iterator(trace_dir))
            if (de.path().extension() == ".csv") csvs.push_back(de.path());
        std::sort(csvs.begin(), csvs.end());
        for (const auto& p : csvs) {
            try {
                SweepTrace t = read_trace(p.string());
                found[{t.chip_id, t.junction_id}][t.direction] = p.string();
            } catch (const std::exception& e) {
                result.file_errors.push_back(e.what());
            }
        }
        for (const auto& [key, dirs] : found) {
            if (!dirs.count(SweepDirection::down) || !dirs.count(SweepDirection::up)) {
                result.file_errors.push_back("unpaired trace for " + key.first + " " +
                                             key.second);
                continue;
            }
            Entry entry;
            entry.down_file = dirs.at(SweepDirection::down);
            entry.up_file = dirs.at(SweepDirection::up);
            entry.has_geometry = table1_geometry(key.second, entry.L_J_um, entry.W_c_nm);
            entries.push_back(entry);
        }
        if (entries.empty() && result.file_errors.empty())
            throw ParseError("analyze: no trace files in " + trace_dir);
    }

    for (const auto& entry : entries) {
        try {
            const fs::path base(trace_dir);
            const std::string down_path = fs::path(entry.down_file).is_absolute()
                                              ? entry.down_file
                                              : (base / entry.down_file).string();
            const std::string up_path = fs::path(entry.up_file).is_absolute()
                                            ? entry.up_file
                                            : (base / entry.up_file).string();
            SweepTrace down = read_trace(down_path);
            SweepTrace up = read_trace(up_path);
            DeviceRecord rec;
            rec.metrics = analyze_trace_pair(down, up, config);
            rec.L_J_um = entry.L_J_um;
            rec.W_c_nm = entry.W_c_nm;
            rec.has_geometry = entry.has_geometry;
            rec.failure = entry.failure;
            result.report.devices.push_back(rec);
        } catch (const std::exception& e) {
            result.file_errors.push_back(e.what());
        }
    }
    if (result.report.devices.empty() && result.file_errors.empty())
        throw ParseError("analyze: no usable trace pairs in " + trace_dir);
    return result;
}

YieldTable yield_by_chip(const AnalysisReport& report) {
    std::vector<YieldRecord> records;
    for (const auto& d : report.devices)
        records.push_back({d.metrics.chip_id, d.metrics.is_switching, true});
    return yield_table(records);
}

YieldTable yield_by_class(const AnalysisReport& report) {
    std::vector<YieldRecord> records;
    for (const auto& d : report.devices) {
        if (!d.has_geometry) continue;
        records.push_back({class_key(d.L_J_um, d.W_c_nm), d.metrics.is_switching, true});
    }
    return yield_table(records);
}

std::map<std::string, std::map<std::string, BoxStats>> boxes_by_group(
    const AnalysisReport& report, bool by_chip) {
    std::map<std::string, std::map<std::string, std::vector<double>>> values;
    for (const auto& d : report.devices) {
        const std::string& group = by_chip ? d.metrics.chip_id : d.metrics.junction_id;
        auto& g = values[group];
        if (d.metrics.v_pinch_down) g["v_pinch_down"].push_back(*d.metrics.v_pinch_down);
        if (d.metrics.v_pinch_up) g["v_pinch_up"].push_back(*d.metrics.v_pinch_up);
        g["g_on"].push_back(d.metrics.g_on);
        g["g_off"].push_back(d.metrics.g_off);
    }
    std::map<std::string, std::map<std::string, BoxStats>> out;
    for (const auto& [group, quantities] : values)
        for (const auto& [name, vals] : quantities)
            if (!vals.empty()) out[group][name] = box_stats(vals);
    return out;
}

namespace {

void collect_correlation(const AnalysisReport& report, bool against_length,
                         std::vector<double>& x, std::vector<double>& y) {
    for (const auto& d : report.devices) {
        if (!d.has_geometry || !d.metrics.v_pinch) continue;
        x.push_back(against_length ? d.L_J_um : d.W_c_nm);
        y.push_back(*d.metrics.v_pinch);
    }
}

ordered_json correlation_to_json(const AnalysisReport& report, bool against_length) {
    std::vector<double> x, y;
    collect_correlation(report, against_length, x, y);
    try {
        const CorrelationResult r = correlate(x, y);
        ordered_json o;
        o["pearson_r"] = r.pearson_r;
        o["slope"] = r.slope;
        o["intercept"] = r.intercept;
        o["n"] = r.n;
        return o;
    } catch (const std::invalid_argument&) {
        return nullptr;  // degenerate (constant x or too few points)
    }
}

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
    ordered_json o;
    o["config"]["off_frac"] = report.config.off_frac;
    o["config"]["persistence"] = report.config.persistence;
    o["config"]["tail_frac"] = report.config.tail_frac;
    o["config"]["min_g_on_S"] = report.config.min_g_on;
    o["config"]["v_pinch_average"] = report.config.v_pinch_average;

    o["devices"] = ordered_json::array();
    for (const auto& d : report.devices) {
        ordered_json j;
        j["chip_id"] = d.metrics.chip_id;
        j["junction_id"] = d.metrics.junction_id;
        if (d.has_geometry) {
            j["L_J_um"] = d.L_J_um;
            j["W_c_nm"] = d.W_c_nm;
        }
        j["failure"] = d.failure;
        j["v_pinch_down_V"] =
            d.metrics.v_pinch_down ? ordered_json(*d.metrics.v_pinch_down) : nullptr;
        j["v_pinch_up_V"] =
            d.metrics.v_pinch_up ? ordered_json(*d.metrics.v_pinch_up) : nullptr;
        j["v_pinch_V"] = d.metrics.v_pinch ? ordered_json(*d.metrics.v_pinch) : nullptr;
        j["g_on_S"] = d.metrics.g_on;
        j["g_off_S"] = d.metrics.g_off;
        j["hysteresis_S"] = d.metrics.hysteresis_max;
        j["is_switching"] = d.metrics.is_switching;
        o["devices"].push_back(j);
    }

    for (bool by_chip : {true, false}) {
        auto boxes = boxes_by_group(report, by_chip);
        ordered_json& dst = o["box_stats"][by_chip ? "by_chip" : "by_junction"];
        dst = ordered_json::object();
        for (const auto& [group, quantities] : boxes)
            for (const auto& [name, box] : quantities) dst[group][name] = box_to_json(box);
    }

    o["yield"]["by_chip"] = yield_to_json(yield_by_chip(report), 0, 2);
    o["yield"]["by_class"] = yield_to_json(yield_by_class(report), 1, 2);
    o["correlations"]["v_pinch_vs_L_J"] = correlation_to_json(report, true);
    o["correlations"]["v_pinch_vs_W_c"] = correlation_to_json(report, false);
    return o.dump(2) + "\n";
}

std::string metrics_to_csv(const AnalysisReport& report) {
    std::string out =
        "chip_id,junction_id,v_pinch_down_V,v_pinch_up_V,g_on_S,g_off_S,hysteresis_S,is_switching\n";
    for (const auto& d : report.devices) {
        out += d.metrics.chip_id + "," + d.metrics.junction_id + ",";
        out += d.metrics.v_pinch_down ? fmt9e(*d.metrics.v_pinch_down) : std::string();
        out += ",";
        out += d.metrics.v_pinch_up ? fmt9e(*d.metrics.v_pinch_up) : std::string();
        out += ",";
        out += fmt9e(d.metrics.g_on);
        out += ",";
        out += fmt9e(d.metrics.g_off);
        out += ",";
        out += fmt9e(d.metrics.hysteresis_max);
        out += ",";
        out += d.metrics.is_switching ? "1" : "0";
        out += "\n";
    }
    return out;
}

void write_report(const AnalysisReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "report.json").string(), report_to_json(report));
    write_file((fs::path(out_dir) / "metrics.csv").string(), metrics_to_csv(report));
}

void write_plot_data(const std::string& report_json_path, const std::string& out_dir) {
    ordered_json o;
    try {
        o = ordered_json::parse(read_file(report_json_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("report: " + std::string(e.what()));
    }
    if (!o.contains("devices") || !o.contains("box_stats"))
        throw ParseError("report: schema mismatch, missing devices/box_stats");
    fs::create_directories(out_dir);

    std::string boxes =
        "group_kind,group,quantity,n,mean,median,q1,q3,iqr,whisker_low,whisker_high,n_outliers\n";
    for (const char* kind : {"by_chip", "by_junction"}) {
        for (auto it = o["box_stats"][kind].begin(); it != o["box_stats"][kind].end(); ++it) {
            for (auto q = it.value().begin(); q != it.value().end(); ++q) {
                const auto& b = q.value();
                boxes += std::string(kind) + "," + it.key() + "," + q.key() + "," +
                         std::to_string(b["n"].get<int>()) + "," +
                         fmt9e(b["mean"].get<double>()) + "," +
                         fmt9e(b["median"].get<double>()) + "," +
                         fmt9e(b["q1"].get<double>()) + "," + fmt9e(b["q3"].get<double>()) +
                         "," + fmt9e(b["iqr"].get<double>()) + "," +
                         fmt9e(b["whisker_low"].get<double>()) + "," +
                         fmt9e(b["whisker_high"].get<double>()) + "," +
                         std::to_string(b["outliers"].size()) + "\n";
            }
        }
    }
    write_file((fs::path(out_dir) / "boxes.csv").string(), boxes);

    std::string scatter_lj = "chip_id,junction_id,L_J_um,v_pinch_V\n";
    std::string scatter_wc = "chip_id,junction_id,W_c_nm,v_pinch_V\n";
    for (const auto& d : o["devices"]) {
        if (!d.contains("L_J_um") || d["v_pinch_V"].is_null()) continue;
        const std::string prefix = d["chip_id"].get<std::string>() + "," +
                                   d["junction_id"].get<std::string>() + ",";
        scatter_lj += prefix + fmt9e(d["L_J_um"].get<double>()) + "," +
                      fmt9e(d["v_pinch_V"].get<double>()) + "\n";
        scatter_wc += prefix + fmt9e(d["W_c_nm"].get<double>()) + "," +
                      fmt9e(d["v_pinch_V"].get<double>()) + "\n";
    }
    write_file((fs::path(out_dir) / "scatter_v_pinch_vs_L_J.csv").string(), scatter_lj);
    write_file((fs::path(out_dir) / "scatter_v_pinch_vs_W_c.csv").string(), scatter_wc);
}

}  // namespace hfs
