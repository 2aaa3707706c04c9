#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lnagell::cli {

using Json = nlohmann::ordered_json;

/// File-system failure (missing input, unwritable output, malformed checkpoint).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Completed work items of one (command, config hash), persisted after every update.
class Checkpoint {
public:
    /// Loads an existing checkpoint when `resume` is set; starts empty otherwise.
    Checkpoint(std::filesystem::path dir, const std::string& command, const std::string& config_hash, bool resume);

    bool has(const std::string& key) const { return done_.contains(key); }
    const Json& get(const std::string& key) const { return done_.at(key); }
    void put(const std::string& key, Json value);
    std::size_t restored() const { return restored_; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::string command_, hash_;
    Json done_ = Json::object();
    std::size_t restored_ = 0;
};

struct Manifest {
    std::string command;
    Json config;
    std::string config_hash;
    std::vector<std::string> artifacts;
    int exit_code = 0;
};

void write_manifest(const std::filesystem::path& dir, const Manifest& m);

}  // namespace lnagell::cli
