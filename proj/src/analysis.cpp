#include "hfs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hfs {

namespace {

// samples ordered from v_g = 0 toward negative
std::vector<SweepSample> sorted_descending(const SweepTrace& trace) {
    std::vector<SweepSample> s = trace.samples;
    std::sort(s.begin(), s.end(),
              [](const SweepSample& a, const SweepSample& b) { return a.v_g > b.v_g; });
    return s;
}

double quantile(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double extract_g_on(const SweepTrace& trace) {
    if (trace.samples.empty()) throw std::invalid_argument("extract_g_on: empty trace");
    auto s = sorted_descending(trace);
    if (s.front().v_g < 0.0)
        throw std::invalid_argument("extract_g_on: trace does not reach v_g >= 0");
    // s is descending; find the pair straddling 0
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i].v_g == 0.0) return s[i].g_meas;
        if (s[i].v_g < 0.0) {
            if (i == 0) break;
            const auto& a = s[i - 1];  // positive side
            const auto& b = s[i];      // negative side
            const double t = (0.0 - b.v_g) / (a.v_g - b.v_g);
            return b.g_meas + t * (a.g_meas - b.g_meas);
        }
    }
    throw std::invalid_argument("extract_g_on: no sample at or bracketing v_g = 0");
}

double extract_g_off(const SweepTrace& trace, double tail_frac) {
    if (trace.samples.empty()) throw std::invalid_argument("extract_g_off: empty trace");
    auto s = sorted_descending(trace);
    const double v_max = s.front().v_g;
    const double v_min = s.back().v_g;
    const double cutoff = v_min + tail_frac * (v_max - v_min);
    double sum = 0.0;
    int count = 0;
    for (const auto& sample : s) {
        if (sample.v_g <= cutoff) {
            sum += sample.g_meas;
            ++count;
        }
    }
    if (count == 0) {  // degenerate range; fall back to most-negative sample
        return s.back().g_meas;
    }
    return sum / count;
}

std::optional<double> extract_pinch_off(const SweepTrace& trace, double off_frac,
                                        int persistence) {
    if (persistence < 1) throw std::invalid_argument("extract_pinch_off: persistence >= 1");
    double g_on = 0.0;
    try {
        g_on = extract_g_on(trace);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    if (g_on <= 0.0) return std::nullopt;  // dead device, not switching
    const double threshold = off_frac * g_on;
    auto s = sorted_descending(trace);
    int run = 0;
    double run_start = 0.0;
    for (const auto& sample : s) {
        if (sample.g_meas < threshold) {
            if (run == 0) run_start = sample.v_g;
            if (++run >= persistence) return run_start;
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

bool classify_switching(const TraceMetrics& down, const TraceMetrics& up, double min_g_on) {
    return down.v_pinch.has_value() && up.v_pinch.has_value() &&
           down.g_on >= min_g_on && up.g_on >= min_g_on;
}

double hysteresis_max(const SweepTrace& down, const SweepTrace& up) {
    auto a = sorted_descending(down);
    auto b = sorted_descending(up);
    if (a.empty() || b.empty()) throw std::invalid_argument("hysteresis_max: empty trace");
    const double hi = std::min(a.front().v_g, b.front().v_g);
    const double lo = std::max(a.back().v_g, b.back().v_g);
    if (lo > hi) throw std::invalid_argument("hysteresis_max: disjoint v_g ranges");
    // b ascending for interpolation
    std::reverse(b.begin(), b.end());
    auto interp = [&](double v) {
        auto it = std::lower_bound(b.begin(), b.end(), v,
                                   [](const SweepSample& s, double x) { return s.v_g < x; });
        if (it == b.begin()) return it->g_meas;
        if (it == b.end()) return (it - 1)->g_meas;
        const auto& p = *(it - 1);
        const auto& q = *it;
        if (q.v_g == p.v_g) return p.g_meas;
        const double t = (v - p.v_g) / (q.v_g - p.v_g);
        return p.g_meas + t * (q.g_meas - p.g_meas);
    };
    double best = 0.0;
    for (const auto& s : a) {
        if (s.v_g < lo || s.v_g > hi) continue;
        best = std::max(best, std::abs(s.g_meas - interp(s.v_g)));
    }
    return best;
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("box_stats: empty input");
    std::sort(values.begin(), values.end());
    BoxStats b;
    b.n = static_cast<int>(values.size());
    b.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    b.median = quantile(values, 0.5);
    b.q1 = quantile(values, 0.25);
    b.q3 = quantile(values, 0.75);
    b.iqr = b.q3 - b.q1;
    const double lo_limit = b.q1 - 1.5 * b.iqr;
    const double hi_limit = b.q3 + 1.5 * b.iqr;
    // whiskers: furthest datum within the 1.5 IQR fences. Note the
    // interpolated quartiles can fall outside the surviving data, so the
    // whiskers come from the data alone.
    bool any_inside = false;
    double lo = 0.0, hi = 0.0;
    for (double v : values) {
        if (v < lo_limit || v > hi_limit) {
            b.outliers.push_back(v);
            continue;
        }
        if (!any_inside) {
            lo = hi = v;
            any_inside = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    b.whisker_low = any_inside ? lo : b.median;
    b.whisker_high = any_inside ? hi : b.median;
    return b;
}

std::string format_percent(double value, int decimals) {
    double scale = 1.0;
    for (int i = 0; i < decimals; ++i) scale *= 10.0;
    const double rounded = std::llround(value * scale) / scale;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, rounded);
    return buf;
}

YieldTable yield_table(const std::vector<YieldRecord>& records) {
    YieldTable table;
    std::vector<std::string> order;
    std::map<std::string, YieldRow> rows;
    for (const auto& r : records) {
        if (!rows.count(r.group_key)) {
            order.push_back(r.group_key);
            rows[r.group_key] = YieldRow{r.group_key, 0, 0, std::nullopt};
        }
        if (!r.was_measured) continue;  // unmeasured devices excluded
        auto& row = rows[r.group_key];
        row.measured_count += 1;
        if (r.is_switching) row.switching_count += 1;
    }
    table.total = YieldRow{"total", 0, 0, std::nullopt};
    for (const auto& key : order) {
        auto row = rows[key];
        if (row.measured_count > 0)
            row.yield_percent = 100.0 * row.switching_count / row.measured_count;
        table.total.switching_count += row.switching_count;
        table.total.measured_count += row.measured_count;
        table.rows.push_back(row);
    }
    if (table.total.measured_count > 0)
        table.total.yield_percent =
            100.0 * table.total.switching_count / table.total.measured_count;
    return table;
}

CorrelationResult correlate(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("correlate: length mismatch");
    const size_t n = x.size();
    if (n < 3) throw std::invalid_argument("correlate: need at least 3 points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("correlate: x is constant");
    CorrelationResult r;
    r.n = static_cast<int>(n);
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.pearson_r = syy == 0.0 ? 0.0 : sxy / std::sqrt(sxx * syy);
    return r;
}

TraceMetrics trace_metrics(const SweepTrace& trace, const AnalysisConfig& config) {
    TraceMetrics m;
    m.g_on = extract_g_on(trace);
    m.g_off = extract_g_off(trace, config.tail_frac);
    m.v_pinch = extract_pinch_off(trace, config.off_frac, config.persistence);
    return m;
}

DeviceMetrics analyze_trace_pair(const SweepTrace& down, const SweepTrace& up,
                                 const AnalysisConfig& config) {
    if (down.chip_id != up.chip_id || down.junction_id != up.junction_id)
        throw std::invalid_argument("analyze_trace_pair: chip/junction id mismatch");
    const TraceMetrics md = trace_metrics(down, config);
    const TraceMetrics mu = trace_metrics(up, config);
    DeviceMetrics d;
    d.chip_id = down.chip_id;
    d.junction_id = down.junction_id;
    d.v_pinch_down = md.v_pinch;
    d.v_pinch_up = mu.v_pinch;
    if (md.v_pinch && mu.v_pinch)
        d.v_pinch = config.v_pinch_average ? (*md.v_pinch + *mu.v_pinch) / 2.0 : *md.v_pinch;
    else if (md.v_pinch && !config.v_pinch_average)
        d.v_pinch = md.v_pinch;
    d.g_on = (md.g_on + mu.g_on) / 2.0;
    d.g_off = (md.g_off + mu.g_off) / 2.0;
    d.hysteresis_max = hysteresis_max(down, up);
    d.is_switching = classify_switching(md, mu, config.min_g_on);
    return d;
}

}  // namespace hfs
