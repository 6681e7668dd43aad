#include "fanolab/cli/commands.hpp"

#include "fanolab/identity/checks.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <thread>

namespace fanolab::cli {

const std::vector<std::string>& identity_suites()
{
    static const std::vector<std::string> s{"bochner", "k1", "prop6", "theorem_e", "complex_structure",
                                            "linearization", "coupled"};
    return s;
}

namespace {

struct Task {
    std::string suite;
    std::function<IdentityReport()> run;
    /// Distinguishes runs that share an identity name, e.g. "k=2".
    std::string variant;
};

/// Controls whose median must exceed a threshold for the check to have power.
const std::map<std::string, double>& power_thresholds()
{
    static const std::map<std::string, double> t{{"lemma_k1", 1e-3}, {"theorem_e", 1e-4}};
    return t;
}

std::vector<int> dims_for(const std::string& suite, const std::vector<int>& m)
{
    if (!m.empty()) {
        return m;
    }
    if (suite == "bochner") {
        return {1, 2, 3};
    }
    if (suite == "prop6" || suite == "theorem_e" || suite == "complex_structure") {
        return {1, 2};
    }
    return {2};
}

std::string key(const IdentityReport& r, const std::string& variant)
{
    return variant.empty() ? r.name : r.name + "[" + variant + "]";
}

json record(const std::string& suite, const IdentityReport& r, const std::string& variant)
{
    json j;
    j["suite"] = suite;
    j["name"] = r.name;
    if (!variant.empty()) {
        j["variant"] = variant;
    }
    j["m"] = r.m;
    j["p"] = r.p;
    j["q"] = r.q;
    j["seed"] = r.seed;
    j["abs_residual"] = r.abs_residual;
    j["rel_residual"] = r.rel_residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    if (r.control_residual) {
        j["control"] = {{"dropped", r.control_dropped}, {"residual", *r.control_residual}};
    }
    if (!r.details.empty()) {
        json d = json::object();
        for (const auto& [k, v] : r.details) {
            d[k] = v;
        }
        j["details"] = d;
    }
    return j;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

CommandResult run_identities(const IdentitiesConfig& c)
{
    std::vector<std::string> suites;
    for (const auto& s : c.suites) {
        if (s == "all") {
            suites = identity_suites();
            break;
        }
        if (std::find(identity_suites().begin(), identity_suites().end(), s) == identity_suites().end()) {
            throw ConfigError("unknown identity suite \"" + s + "\"");
        }
        if (std::find(suites.begin(), suites.end(), s) == suites.end()) {
            suites.push_back(s);
        }
    }
    if (suites.empty()) {
        throw ConfigError("no identity suite selected");
    }
    if (c.seeds.empty()) {
        throw ConfigError("empty seed list");
    }
    for (int m : c.m) {
        if (m < 1 || m > 3) {
            throw ConfigError("dimension m must be 1, 2 or 3");
        }
    }
    if (c.jobs < 1) {
        throw ConfigError("jobs must be >= 1");
    }

    ReportBuilder rb("identities");
    rb.config() = {{"suites", suites},
                   {"m", c.m},
                   {"dims", json::object()},
                   {"seeds", c.seeds},
                   {"control", c.control},
                   {"tolerance", c.tolerance}};

    CheckOptions opt;
    opt.tolerance = c.tolerance;
    opt.control = c.control;
    std::vector<Task> tasks;
    for (const auto& suite : suites) {
        const std::vector<int> dims = dims_for(suite, c.m);
        rb.config()["dims"][suite] = dims;
        for (int m : dims) {
            for (std::uint64_t seed : c.seeds) {
                if (suite == "bochner") {
                    for (auto [p, q] : {std::pair{0, 1}, {0, 2}, {1, 1}, {1, 2}}) {
                        if (q > m) {
                            continue;
                        }
                        for (bool w : {false, true}) {
                            tasks.push_back({suite, [=] { return check_bochner_kodaira(m, p, q, seed, w, opt); }, {}});
                        }
                    }
                } else if (suite == "k1") {
                    tasks.push_back({suite, [=] { return check_lemma_k1(m, seed, opt); }, {}});
                } else if (suite == "prop6") {
                    tasks.push_back({suite, [=] { return check_prop6(m, seed, opt); }, {}});
                } else if (suite == "theorem_e") {
                    tasks.push_back({suite, [=] { return check_theorem_e(m, seed, opt); }, {}});
                } else if (suite == "complex_structure") {
                    tasks.push_back({suite, [=] { return check_complex_structure(m, seed, opt); }, {}});
                } else if (suite == "linearization") {
                    tasks.push_back({suite, [=] { return check_scalar_linearization(m, seed, opt); }, {}});
                    tasks.push_back({suite, [=] { return check_ricci_volume_variation(m, seed, opt); }, {}});
                } else if (suite == "coupled") {
                    for (int q = 0; q <= std::min(1, m); ++q) {
                        tasks.push_back({suite, [=] { return check_coupled_bk(2, m, q, seed, opt); }, "k=2"});
                        tasks.push_back({suite, [=] { return check_coupled_bk(1, m, q, seed, opt); }, "k=1"});
                    }
                }
            }
        }
    }

    // fixed-size pool; results land at their task index, so the merge order is the task order
    std::vector<std::optional<IdentityReport>> out(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                out[i] = tasks[i].run();
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const int n = std::min<int>(c.jobs, static_cast<int>(tasks.size()));
        for (int k = 1; k < n; ++k) {
            pool.emplace_back(worker);
        }
        worker();
    }

    std::map<std::string, std::vector<double>> controls;
    std::map<std::string, double> worst;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!out[i]) {
            rb.add_check({{"suite", tasks[i].suite}, {"pass", false}, {"error", errors[i]}});
            continue;
        }
        const IdentityReport& r = *out[i];
        const std::string k = key(r, tasks[i].variant);
        rb.add_check(record(tasks[i].suite, r, tasks[i].variant));
        worst[k] = std::max(worst[k], r.rel_residual);
        if (r.control_residual) {
            controls[k].push_back(*r.control_residual);
        }
    }
    json max_res = json::object();
    for (const auto& [k, v] : worst) {
        max_res[k] = v;
    }
    rb.results()["max_rel_residual"] = max_res;
    if (c.control) {
        json med = json::object();
        for (const auto& [name, v] : controls) {
            const double mm = median(v);
            med[name] = mm;
            const auto t = power_thresholds().find(name);
            if (t != power_thresholds().end()) {
                rb.add_check({{"suite", "power"},
                              {"name", "control_median:" + name},
                              {"value", mm},
                              {"threshold", t->second},
                              {"pass", mm > t->second}});
            }
        }
        rb.results()["control_median"] = med;
    }
    return rb.finish();
}

} // namespace fanolab::cli
