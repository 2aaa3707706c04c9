#include "persist.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace lnagell::cli {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

Checkpoint::Checkpoint(fs::path dir, const std::string& command, const std::string& config_hash, bool resume)
    : path_(dir / ("checkpoint-" + command + "-" + config_hash + ".json")), command_(command), hash_(config_hash) {
    if (!resume || !fs::exists(path_)) return;
    Json doc;
    try {
        doc = Json::parse(read_file(path_));
    } catch (const Json::exception& e) {
        throw IoError("malformed checkpoint " + path_.string() + ": " + e.what());
    }
    if (doc.value("command", "") != command_ || doc.value("config_hash", "") != hash_) {
        throw IoError("checkpoint " + path_.string() + " belongs to another run");
    }
    done_ = doc.at("done");
    restored_ = done_.size();
}

void Checkpoint::put(const std::string& key, Json value) {
    done_[key] = std::move(value);
    Json doc;
    doc["command"] = command_;
    doc["config_hash"] = hash_;
    doc["done"] = done_;
    write_atomic(path_, doc.dump(2) + "\n");
}

void write_manifest(const fs::path& dir, const Manifest& m) {
    Json doc;
    doc["command"] = m.command;
    doc["config"] = m.config;
    doc["config_hash"] = m.config_hash;
    doc["artifacts"] = m.artifacts;
    doc["exit_code"] = m.exit_code;
    write_atomic(dir / ("manifest-" + m.command + ".json"), doc.dump(2) + "\n");
}

}  // namespace lnagell::cli
