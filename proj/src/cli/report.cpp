#include "fanolab/cli/report.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fanolab::cli {

std::string tool_version()
{
    return "0.1.0";
}

std::vector<std::uint64_t> parse_seeds(const std::string& s)
{
    auto number = [&](const std::string& t) -> std::uint64_t {
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("bad seed \"" + t + "\" in \"" + s + "\"");
        }
        return std::stoull(t);
    };
    std::vector<std::uint64_t> out;
    if (s.find(',') != std::string::npos) {
        std::stringstream in(s);
        std::string item;
        while (std::getline(in, item, ',')) {
            out.push_back(number(item));
        }
    } else if (const auto colon = s.find(':'); colon != std::string::npos) {
        const std::uint64_t a = number(s.substr(0, colon));
        const std::uint64_t b = number(s.substr(colon + 1));
        for (std::uint64_t x = a; x <= b; ++x) {
            out.push_back(x);
        }
    } else if (!s.empty()) {
        const std::uint64_t n = number(s);
        for (std::uint64_t x = 1; x <= n; ++x) {
            out.push_back(x);
        }
    }
    if (out.empty()) {
        throw ConfigError("empty seed list");
    }
    return out;
}

ReportBuilder::ReportBuilder(std::string command)
    : command_(std::move(command)), wall_start_(std::chrono::system_clock::now()), start_(std::chrono::steady_clock::now())
{
}

void ReportBuilder::add_check(json record)
{
    if (record.value("pass", false)) {
        ++passed_;
    } else {
        ++failed_;
    }
    checks_.push_back(std::move(record));
}

CommandResult ReportBuilder::finish(json timing)
{
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::time_t t = std::chrono::system_clock::to_time_t(wall_start_);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream iso;
    iso << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");

    json r;
    r["schema"] = kSchema;
    r["tool"] = "fanolab";
    r["version"] = tool_version();
    r["command"] = command_;
    r["config"] = config_;
    r["results"] = results_;
    r["checks"] = checks_;
    r["summary"] = {{"total", passed_ + failed_}, {"passed", passed_}, {"failed", failed_}, {"pass", failed_ == 0}};
    json ts = {{"started_utc", iso.str()}, {"wall_seconds", seconds}};
    for (auto it = timing.begin(); it != timing.end(); ++it) {
        ts[it.key()] = it.value();
    }
    r["timestamp"] = ts;
    return {std::move(r), failed_ == 0 ? kExitPass : kExitFail};
}

std::string canonical_dump(const json& report)
{
    json copy = report;
    copy.erase("timestamp");
    return copy.dump(2);
}

std::optional<std::filesystem::path> default_out_dir()
{
    const char* v = std::getenv("FANOLAB_OUT_DIR");
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::filesystem::path(v);
}

std::filesystem::path resolve_output(const std::filesystem::path& p)
{
    if (p.is_relative()) {
        if (const auto dir = default_out_dir()) {
            return *dir / p;
        }
    }
    return p;
}

void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::error_code ec;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out || !(out << text)) {
        throw ConfigError("cannot write " + p.string());
    }
}

} // namespace fanolab::cli
