#pragma once

#include <string>
#include <vector>

#include "hfs/simulator.hpp"

namespace hfs {

// Trace file: CSV, header
//   chip_id,junction_id,direction,v_g_volts,g_siemens,g_raw_siemens
// one row per sample in acquisition order, numbers as %.9e. A sidecar
// <basename>.meta.json records protocol, seed, and noise config.
std::string trace_to_csv(const SweepTrace& trace);
SweepTrace trace_from_csv(const std::string& text, const std::string& name);

void write_trace(const SweepTrace& trace, const NoiseConfig& noise,
                 const std::string& csv_path);
SweepTrace read_trace(const std::string& csv_path);

std::string trace_basename(const SweepTrace& trace);

}  // namespace hfs
