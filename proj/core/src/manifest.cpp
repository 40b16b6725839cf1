#include <fstream>
#include <istream>
#include <ostream>

#include "fallacy/error.hpp"
#include "fallacy/gateway.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"

namespace fallacy {

using nlohmann::json;

void write_manifest(std::ostream& out, const RunManifest& manifest) {
    nlohmann::ordered_json meta;
    meta["kind"] = "meta";
    meta["run_id"] = manifest.meta.run_id;
    meta["backend"] = manifest.meta.backend;
    meta["variant"] = manifest.meta.variant;
    meta["max_new_tokens"] = manifest.meta.max_new_tokens;
    meta["decoding"] = "greedy";
    meta["started"] = manifest.meta.started;
    meta["finished"] = manifest.meta.finished;
    meta["entries"] = manifest.entries.size();
    out << meta.dump() << '\n';
    for (const auto& e : manifest.entries) {
        nlohmann::ordered_json obj;
        obj["record_id"] = e.record_id;
        obj["text"] = e.text;
        obj["latency_ms"] = e.latency_ms;
        obj["retries"] = e.retries;
        obj["failed"] = e.failed;
        if (!e.error.empty()) obj["error"] = e.error;
        out << obj.dump() << '\n';
    }
}

RunManifest read_manifest(std::istream& in) {
    RunManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    bool have_meta = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            const auto obj = json::parse(line);
            if (!have_meta) {
                if (obj.value("kind", "") != "meta") throw ParseError("first line must be the metadata object");
                manifest.meta.run_id = obj.value("run_id", "");
                manifest.meta.backend = obj.value("backend", "");
                manifest.meta.variant = obj.value("variant", "");
                manifest.meta.max_new_tokens = obj.value("max_new_tokens", kLabelMaxNewTokens);
                manifest.meta.started = obj.value("started", "");
                manifest.meta.finished = obj.value("finished", "");
                have_meta = true;
                continue;
            }
            ManifestEntry e;
            e.record_id = obj.at("record_id").get<std::string>();
            e.text = obj.at("text").get<std::string>();
            e.latency_ms = obj.value("latency_ms", 0.0);
            e.retries = obj.value("retries", std::size_t{0});
            e.failed = obj.value("failed", false);
            e.error = obj.value("error", "");
            manifest.entries.push_back(std::move(e));
        } catch (const std::exception& e) {
            throw ParseError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_meta) throw ParseError("manifest: empty file");
    return manifest;
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return read_manifest(in);
}

}  // namespace fallacy
