#include "buresnum/manifest.hpp"
#include "buresnum/common.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace buresnum {

std::string to_hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j{{"command", m.command},
                     {"params", nlohmann::json::parse(m.params_json)},
                     {"code_version", m.code_version},
                     {"wall_ms", m.wall_ms},
                     {"result_digest", m.result_digest}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
    out << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_manifest: cannot open " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.params_json = j.at("params").dump();
    m.code_version = j.at("code_version").get<std::string>();
    m.wall_ms = j.value("wall_ms", std::int64_t{0});
    m.result_digest = j.at("result_digest").get<std::string>();
    return m;
}

}  // namespace buresnum
