#pragma once
// Run manifests: enough resolved state to reproduce an invocation and
// check the reproduction produced the same result record.

#include <cstdint>
#include <string>

namespace buresnum {

struct RunManifest {
    std::string command;       // subcommand name
    std::string params_json;   // resolved parameters as a JSON object
    std::string code_version;
    std::int64_t wall_ms = 0;
    std::string result_digest;  // hex fnv1a64 of the result record
};

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace buresnum
