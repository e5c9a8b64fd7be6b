#pragma once

#include <stdexcept>
#include <string>

#include "hfs/chip.hpp"

namespace hfs {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Manifest wire format: UTF-8 JSON, canonical field order, unknown fields
// rejected. load(save(c)) == c and a second save is byte-identical.
std::string manifest_to_json(const ChipManifest& chip);
ChipManifest manifest_from_json(const std::string& text);

ChipManifest load_manifest(const std::string& path);
void save_manifest(const ChipManifest& chip, const std::string& path);

Material2DEG material_from_json(const std::string& text);
Material2DEG load_material(const std::string& path);

FailureConfig load_failure_config(const std::string& path);

}  // namespace hfs
