#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hfs/simulator.hpp"

namespace hfs {

struct AnalysisConfig {
    double off_frac = 0.01;      // pinch-off threshold relative to g_on
    int persistence = 3;         // consecutive samples below threshold
    double tail_frac = 0.05;     // g_off window, most-negative fraction of range
    double min_g_on = 7.748091729e-6;  // S, 0.1 conductance quanta
    bool v_pinch_average = true; // combined V_p = mean(down, up); else down
};

struct TraceMetrics {
    std::optional<double> v_pinch;  // V
    double g_on = 0.0;              // S
    double g_off = 0.0;             // S
};

// One record per device (down/up trace pair).
struct DeviceMetrics {
    std::string chip_id;
    std::string junction_id;
    std::optional<double> v_pinch_down;
    std::optional<double> v_pinch_up;
    std::optional<double> v_pinch;  // combined per config
    double g_on = 0.0;              // mean of the two directions
    double g_off = 0.0;
    double hysteresis_max = 0.0;    // S
    bool is_switching = false;
};

struct BoxStats {
    int n = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

struct YieldRow {
    std::string group_key;
    int switching_count = 0;
    int measured_count = 0;
    std::optional<double> yield_percent;  // absent when nothing measured
};

struct YieldTable {
    std::vector<YieldRow> rows;
    YieldRow total;
};

struct YieldRecord {
    std::string group_key;
    bool is_switching = false;
    bool was_measured = true;
};

struct CorrelationResult {
    double pearson_r = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    int n = 0;
};

// Conductance at v_g = 0 (exact sample or linear interpolation).
double extract_g_on(const SweepTrace& trace);

// Mean clamped conductance over the most-negative tail_frac of the range.
double extract_g_off(const SweepTrace& trace, double tail_frac = 0.05);

// First v_g, walking from 0 toward negative, with G below off_frac * g_on
// for `persistence` consecutive samples.
std::optional<double> extract_pinch_off(const SweepTrace& trace, double off_frac = 0.01,
                                        int persistence = 3);

bool classify_switching(const TraceMetrics& down, const TraceMetrics& up, double min_g_on);

double hysteresis_max(const SweepTrace& down, const SweepTrace& up);

// Quartiles by linear interpolation at p*(n-1); whiskers at the furthest
// datum within 1.5 IQR of the box.
BoxStats box_stats(std::vector<double> values);

YieldTable yield_table(const std::vector<YieldRecord>& records);

std::string format_percent(double value, int decimals);

CorrelationResult correlate(const std::vector<double>& x, const std::vector<double>& y);

TraceMetrics trace_metrics(const SweepTrace& trace, const AnalysisConfig& config = {});

DeviceMetrics analyze_trace_pair(const SweepTrace& down, const SweepTrace& up,
                                 const AnalysisConfig& config = {});

}  // namespace hfs
