#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fanolab::cli {

using json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

std::string tool_version();

/// Invalid configuration or input; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommandResult {
    json report;
    int exit_code = kExitPass;
};

/// "50" -> 1..50, "3:7" -> 3..7, "4,9,11" -> as listed. Throws ConfigError on an empty list.
std::vector<std::uint64_t> parse_seeds(const std::string& s);

/// Envelope shared by all commands; the "timestamp" object holds everything that varies between runs.
class ReportBuilder {
public:
    explicit ReportBuilder(std::string command);

    json& config() { return config_; }
    /// Appends a check record; name and pass are required.
    void add_check(json record);
    json& results() { return results_; }
    int failed() const noexcept { return failed_; }

    /// Report with summary and timestamp; exit 0 iff no check failed.
    CommandResult finish(json timing = json::object());

private:
    std::string command_;
    json config_ = json::object();
    json checks_ = json::array();
    json results_ = json::object();
    int passed_ = 0;
    int failed_ = 0;
    std::chrono::system_clock::time_point wall_start_;
    std::chrono::steady_clock::time_point start_;
};

/// The report without its "timestamp" member, serialized.
std::string canonical_dump(const json& report);

/// Default output directory from FANOLAB_OUT_DIR, if set.
std::optional<std::filesystem::path> default_out_dir();
/// Relative paths are taken inside FANOLAB_OUT_DIR when it is set.
std::filesystem::path resolve_output(const std::filesystem::path& p);
/// Writes text, creating parent directories. Throws ConfigError on failure.
void write_text(const std::filesystem::path& p, const std::string& text);

} // namespace fanolab::cli
