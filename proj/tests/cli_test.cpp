#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "lnagell/modular.hpp"
#include "persist.hpp"

namespace fs = std::filesystem;
using lnagell::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("lnagell-cli-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string str() const { return path_.string(); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

}  // namespace

TEST(Cli, DocumentedExamples) {
    auto r = invoke({"disc-check", "--p", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "formula -216 = resultant -216\n");
    r = invoke({"local-count", "--p", "3", "--n", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("6"), std::string::npos);
    r = invoke({"r-cert-verify", "--file", "missing.json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("missing.json"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 64);
    EXPECT_EQ(invoke({"bogus"}).code, 64);
    EXPECT_EQ(invoke({"disc-check", "--p", "x"}).code, 64);
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({"--resume", "disc-check", "--p", "3"}).code, 1);
}

TEST(Cli, SieveRefutationExitCode) {
    const auto r = invoke({"sieve", "--x", "5", "--y", "11", "--p", "3", "--unchecked"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("FAIL odd_and_y_7_mod_8"), std::string::npos);
}

TEST(Cli, CertificateArtifactsMatchLibraryAndResume) {
    TempDir dir;
    const std::vector<std::string> args{"--out", dir.str(), "r-cert-generate", "--p", "17", "--curve", "all"};
    auto r = invoke(args);
    ASSERT_EQ(r.code, 0) << r.err;

    const auto curves = lnagell::load_curves(LNAGELL_ASSET_DIR "/curves_128.json");
    const auto& F = curves.curves[curves.minimal];
    const auto file = dir / ("rcert-p17-" + F.label + ".json");
    ASSERT_TRUE(fs::exists(file));
    const auto lib = lnagell::generate_certificate(17, F);
    EXPECT_EQ(lnagell::cli::read_file(file), lnagell::certificate_to_json(lib.certificate) + "\n");

    const std::string manifest = lnagell::cli::read_file(dir / "manifest-r-cert-generate.json");
    auto resumed = args;
    resumed.insert(resumed.begin(), "--resume");
    r = invoke(resumed);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("resuming: 4 item(s)"), std::string::npos) << r.err;
    EXPECT_EQ(lnagell::cli::read_file(dir / "manifest-r-cert-generate.json"), manifest);

    EXPECT_EQ(invoke({"r-cert-verify", "--file", file.string()}).code, 0);
    auto doc = lnagell::cli::Json::parse(lnagell::cli::read_file(file));
    doc["primes"][0]["n"] = doc["primes"][0]["n"].get<unsigned long>() + 1;
    const auto bad = dir / "mutated.json";
    std::ofstream(bad) << doc.dump(2);
    r = invoke({"r-cert-verify", "--file", bad.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("rejected"), std::string::npos);
}

TEST(Cli, ConfigHashIgnoresWorkersButNotParameters) {
    TempDir a, b, c;
    ASSERT_EQ(invoke({"--out", a.str(), "local-count", "--p", "3", "--n", "40"}).code, 0);
    ASSERT_EQ(invoke({"--out", b.str(), "--workers", "3", "local-count", "--p", "3", "--n", "40"}).code, 0);
    ASSERT_EQ(invoke({"--out", c.str(), "local-count", "--p", "5", "--n", "40"}).code, 0);
    const auto hash = [](const TempDir& d) {
        return lnagell::cli::Json::parse(lnagell::cli::read_file(d / "manifest-local-count.json"))["config_hash"];
    };
    EXPECT_EQ(hash(a), hash(b));
    EXPECT_NE(hash(a), hash(c));
    EXPECT_EQ(lnagell::cli::read_file(a / "local-count.csv"), lnagell::cli::read_file(b / "local-count.csv"));
}
