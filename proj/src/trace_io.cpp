#include "hfs/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hfs/manifest_io.hpp"

namespace hfs {

namespace {

constexpr const char* kHeader = "chip_id,junction_id,direction,v_g_volts,g_siemens,g_raw_siemens";

std::string fmt9e(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

std::string trace_to_csv(const SweepTrace& trace) {
    std::string out = kHeader;
    out += '\n';
    for (const auto& s : trace.samples) {
        out += trace.chip_id;
        out += ',';
        out += trace.junction_id;
        out += ',';
        out += to_string(trace.direction);
        out += ',';
        out += fmt9e(s.v_g);
        out += ',';
        out += fmt9e(s.g_meas);
        out += ',';
        out += fmt9e(s.g_raw);
        out += '\n';
    }
    return out;
}

SweepTrace trace_from_csv(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(name + ": empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw ParseError(name + ":1: bad header, expected '" + kHeader + "'");
    SweepTrace trace;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 6)
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected 6 fields, got " +
                             std::to_string(fields.size()));
        if (trace.samples.empty()) {
            trace.chip_id = fields[0];
            trace.junction_id = fields[1];
            trace.direction = direction_from_string(fields[2]);
        } else if (fields[0] != trace.chip_id || fields[1] != trace.junction_id ||
                   fields[2] != to_string(trace.direction)) {
            throw ParseError(name + ":" + std::to_string(lineno) +
                             ": inconsistent chip/junction/direction columns");
        }
        SweepSample s{};
        try {
            s.v_g = std::stod(fields[3]);
            s.g_meas = std::stod(fields[4]);
            s.g_raw = std::stod(fields[5]);
        } catch (const std::exception&) {
            throw ParseError(name + ":" + std::to_string(lineno) + ": malformed number");
        }
        trace.samples.push_back(s);
    }
    if (trace.samples.size() < 2)
        throw ParseError(name + ": trace needs at least 2 samples");
    return trace;
}

std::string trace_basename(const SweepTrace& trace) {
    return trace.chip_id + "_" + trace.junction_id + "_" + to_string(trace.direction);
}

void write_trace(const SweepTrace& trace, const NoiseConfig& noise,
                 const std::string& csv_path) {
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + csv_path);
        out << trace_to_csv(trace);
    }
    nlohmann::ordered_json meta;
    meta["chip_id"] = trace.chip_id;
    meta["junction_id"] = trace.junction_id;
    meta["direction"] = to_string(trace.direction);
    meta["seed"] = trace.seed;
    meta["protocol"]["v_start_V"] = trace.protocol.v_start;
    meta["protocol"]["v_end_V"] = trace.protocol.v_end;
    meta["protocol"]["v_step_V"] = trace.protocol.v_step;
    meta["protocol"]["v_ac_V"] = trace.protocol.v_ac;
    meta["protocol"]["f_ac_Hz"] = trace.protocol.f_ac;
    meta["protocol"]["integration_time_s"] = trace.protocol.integration_time;
    meta["protocol"]["v_dc_bias_V"] = trace.protocol.v_dc_bias;
    meta["noise"]["enabled"] = noise.enabled;
    meta["noise"]["white_current_sd_A"] = noise.white_current_sd;
    meta["noise"]["pink_current_amp_A"] = noise.pink_current_amp;
    std::string meta_path = csv_path;
    const auto pos = meta_path.rfind(".csv");
    if (pos != std::string::npos) meta_path.resize(pos);
    meta_path += ".meta.json";
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + meta_path);
    out << meta.dump(2) << "\n";
}

SweepTrace read_trace(const std::string& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return trace_from_csv(ss.str(), csv_path);
}

}  // namespace hfs
