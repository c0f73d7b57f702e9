#pragma once

#include <filesystem>
#include <string>

#include "pvdg/network.hpp"
#include "pvdg/pv_model.hpp"

namespace pvdg {

// Reads the three study inputs and cross-validates them. Throws
// ValidationError (with file/field locus) on malformed content and IoError
// when a file cannot be read.
Study load_study(const std::filesystem::path& network_path,
                 const std::filesystem::path& profiles_path,
                 const std::filesystem::path& solar_path);

// Writes the three files back out; loading them again reproduces the study
// field-for-field (doubles survive the round trip bit-exactly).
void save_study(const Study& study, const std::filesystem::path& network_path,
                const std::filesystem::path& profiles_path,
                const std::filesystem::path& solar_path);

// Plan files hold (bus, kW) pairs for nonzero installations.
InstallationPlan load_plan(const std::filesystem::path& path, const Study& study);
void save_plan(const InstallationPlan& plan, const Study& study,
               const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pvdg
