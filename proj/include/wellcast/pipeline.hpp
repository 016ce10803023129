#ifndef WELLCAST_PIPELINE_HPP
#define WELLCAST_PIPELINE_HPP

#include "wellcast/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wellcast {

/// SHA-256 of a file's bytes, as lowercase hex.
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path; // relative to the output directory
    std::string sha256;
};

struct Manifest {
    std::vector<ManifestEntry> files;
    std::string status = "ok";
    std::string error;
};

/// Run the selected stages in workflow order, writing every artifact under
/// cfg.out_dir and a manifest.json listing each file with its content hash.
/// On stage failure the partial manifest is written with status "failed"
/// before the error is rethrown. Returns the manifest on success.
Manifest execute_pipeline(const RunConfig& cfg);

} // namespace wellcast

#endif
