#include "fanolab/cli/commands.hpp"

#include "fanolab/kuranishi/io.hpp"

#include <fstream>
#include <regex>

namespace fanolab::cli {

namespace {

std::optional<int> parse_expectation(const std::string& s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    static const std::regex form(R"(\s*order\s*=\s*([0-9]+)\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, form)) {
        throw ConfigError("--expect-obstruction takes order=K, got \"" + s + "\"");
    }
    return std::stoi(m[1].str());
}

} // namespace

CommandResult run_kuranishi(const KuranishiConfig& c)
{
    namespace kq = fanolab::kuranishi;
    if (c.builtin.empty() == c.file.empty()) {
        throw ConfigError("give exactly one of --builtin and --file");
    }
    if (c.order < 1 || c.order > 64) {
        throw ConfigError("order must be between 1 and 64");
    }
    const std::optional<int> expected = parse_expectation(c.expect_obstruction);

    kq::Dgla d;
    std::optional<std::vector<kq::VectorQ>> linear;
    try {
        if (!c.builtin.empty()) {
            d = kq::builtin_dgla(c.builtin);
        } else {
            std::ifstream in(c.file);
            if (!in) {
                throw kq::FormatError("cannot open " + c.file);
            }
            kq::json j;
            try {
                j = kq::json::parse(in);
            } catch (const kq::json::exception& e) {
                throw kq::FormatError(c.file + ": " + e.what());
            }
            d = kq::dgla_from_json(j);
            linear = kq::linear_from_json(j, d);
        }
    } catch (const kq::FormatError& e) {
        throw ConfigError(e.what());
    }

    ReportBuilder rb("kuranishi");
    rb.config() = {{"builtin", c.builtin},
                   {"file", c.file},
                   {"order", c.order},
                   {"expect_obstruction", expected ? json(*expected) : json(nullptr)}};
    rb.results()["dgla"] = kq::to_json(d);

    const kq::ValidationReport v = kq::dgla_validate(d);
    rb.results()["validation"] = kq::to_json(v);
    if (!v.valid()) {
        throw ConfigError("DGLA fails validation: " + v.violations.front().describe());
    }
    const kq::HodgeData& h = *v.hodge;
    if (!linear) {
        linear = kq::harmonic_degree_one(h);
        rb.config()["linear"] = "harmonic basis";
    } else {
        rb.config()["linear"] = "file";
    }
    if (linear->empty()) {
        throw ConfigError("no degree-1 harmonic data to deform along");
    }
    json lin = json::array();
    for (const auto& x : *linear) {
        lin.push_back(kq::to_json(x));
    }
    rb.results()["linear"] = lin;

    kq::KuranishiSolution s;
    try {
        s = kq::kuranishi_solve(d, h, *linear, c.order);
    } catch (const GaugeError& e) {
        throw ConfigError(e.what());
    }
    rb.results()["solution"] = kq::to_json(s);
    rb.add_check({{"name", "Hodge identities"}, {"pass", h.identities_hold()}});
    rb.add_check({{"name", "gauge residual d*phi = 0"}, {"pass", s.gauge_residual.is_zero()}});
    rb.add_check({{"name", "linear term harmonic"},
                  {"pass", kq::apply(h.at(1).harmonic, 1, s.phi.homogeneous(1)) == s.phi.homogeneous(1)}});
    if (expected) {
        const int found = s.obstruction ? s.obstruction->order : 0;
        rb.add_check({{"name", "obstruction at the expected order"},
                      {"expected", *expected},
                      {"found", s.obstruction ? json(found) : json(nullptr)},
                      {"pass", s.obstructed() && found == *expected}});
        // below the obstruction the MC equation still holds
        const kq::FormalSeries below = kq::mc_residual(d, s.phi, found > 0 ? found - 1 : c.order);
        rb.add_check({{"name", "MC residual zero below the obstruction"}, {"pass", below.is_zero()}});
    } else {
        rb.add_check({{"name", "unobstructed"}, {"pass", !s.obstructed()}});
        rb.add_check({{"name", "MC residual zero through order " + std::to_string(c.order)},
                      {"pass", s.mc_residual.is_zero()}});
    }
    return rb.finish();
}

} // namespace fanolab::cli
