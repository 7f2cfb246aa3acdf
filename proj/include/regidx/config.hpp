#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regidx/cluster.hpp"
#include "regidx/pca.hpp"

namespace regidx {

struct RunConfig {
    std::string data_path;
    std::string spec_path;
    std::string boundaries_path; // optional
    std::vector<int> years;      // empty = all panel years
    std::vector<Scope> scopes = {Scope::Economic, Scope::Social, Scope::Socioeconomic};
    NormMethod norm = NormMethod::MinMax;
    RetentionRule retention = RetentionRule::kaiser();
    std::optional<std::size_t> k = 4; // nullopt = auto (elbow)
    std::size_t k_max = 10;
    std::uint64_t seed = 1;
    std::size_t restarts = 100;
    Linkage linkage = Linkage::Ward;
    std::string out_dir = "out";
    std::vector<std::string> colors; // rating ramp override

    // Resolved key=value echo in a fixed key order (the manifest config block).
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Flat key=value file; '#' starts a comment. Keys mirror the CLI flags
// one-to-one. Unknown keys or unparseable values raise BadConfig.
RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::pair<std::string, std::string>>& flag_overrides);

void validate_config(const RunConfig& config);

struct ManifestEntry {
    std::string file;   // name relative to out_dir
    std::string digest; // fnv1a64:<16 hex>
};

struct RunManifest {
    std::string tool_version;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<std::string> stages;   // executed, in order
    std::vector<ManifestEntry> outputs; // sorted by file name
};

std::uint64_t fnv1a64_file(const std::string& path);
std::string render_manifest(const RunManifest& manifest);

} // namespace regidx
