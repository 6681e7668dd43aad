#include "fanolab/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace fanolab::cli;

namespace {

// pinned tolerances
constexpr double kBochnerTol = 1e-9;
constexpr double kBochnerSeconds = 60;
constexpr double kK1Tol = 1e-9;
constexpr double kK1Control = 1e-3;
constexpr double kProp6Tol = 1e-9;
constexpr double kRicciFormTol = 1e-8;
constexpr double kHelperTol = 1e-10;
constexpr double kRicciFormControl = 1e-4;
constexpr double kLinearizationTol = 1e-8;
constexpr double kSpectrumTol = 1e-6;
constexpr double kFsSeconds = 30;
constexpr double kUnitEigenTol = 1e-6;
constexpr double kHolomorphyTol = 1e-5;
constexpr double kEigenformTol = 1e-6;
constexpr double kFormTol = 1e-10;
constexpr double kPairingTol = 1e-6;
constexpr double kCoupledTol = 1e-9;
constexpr double kKuranishiSeconds = 5;
constexpr double kTotalSeconds = 300;

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string fixed(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", x);
    return buf;
}

struct Line {
    bool pass = true;
    std::ostringstream text;
    void require(bool ok) { pass = pass && ok; }
};

int failures = 0;

void print(int id, const std::string& title, Line& l)
{
    std::cout << "criterion " << id << ": " << (l.pass ? "PASS" : "FAIL") << "  " << title << " | " << l.text.str()
              << std::endl;
    failures += l.pass ? 0 : 1;
}

double seconds(const json& report)
{
    return report["timestamp"]["wall_seconds"].get<double>();
}

/// max over checks with the given identity name (and variant) of a field.
double max_field(const json& report, const std::string& name, const std::string& field, const std::string& variant = {})
{
    double w = 0;
    for (const auto& c : report["checks"]) {
        if (c.value("name", "") == name && c.value("variant", "") == variant) {
            w = std::max(w, c[field].get<double>());
        }
    }
    return w;
}

double max_detail(const json& report, const std::string& name, const std::string& key)
{
    double w = 0;
    for (const auto& c : report["checks"]) {
        if (c.value("name", "") == name && c.contains("details") && c["details"].contains(key)) {
            w = std::max(w, c["details"][key].get<double>());
        }
    }
    return w;
}

int count(const json& report, const std::string& name, const std::string& variant = {})
{
    int n = 0;
    for (const auto& c : report["checks"]) {
        n += (c.value("name", "") == name && c.value("variant", "") == variant) ? 1 : 0;
    }
    return n;
}

bool all_pass(const json& report)
{
    return report["summary"]["pass"].get<bool>();
}

double result(const json& report, const std::string& key)
{
    return report["results"][key].get<double>();
}

CommandResult identities(std::vector<std::string> suites, int seeds, std::vector<int> m = {}, bool control = true)
{
    IdentitiesConfig c;
    c.suites = std::move(suites);
    c.seeds = parse_seeds(std::to_string(seeds));
    c.m = std::move(m);
    c.control = control;
    return run_identities(c);
}

} // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> reports;

    {
        const CommandResult r = identities({"bochner"}, 50, {}, false);
        reports.push_back(canonical_dump(r.report));
        const double plain = max_field(r.report, "bochner_kodaira", "rel_residual");
        const double weighted = max_field(r.report, "bochner_kodaira_weighted", "rel_residual");
        Line l;
        l.require(all_pass(r.report) && plain <= kBochnerTol && weighted <= kBochnerTol &&
                  seconds(r.report) <= kBochnerSeconds && count(r.report, "bochner_kodaira") == 500);
        l.text << count(r.report, "bochner_kodaira") << "+" << count(r.report, "bochner_kodaira_weighted")
               << " checks, max rel " << sci(plain) << " / weighted " << sci(weighted) << " <= " << sci(kBochnerTol)
               << ", " << fixed(seconds(r.report)) << " s <= " << kBochnerSeconds << " s";
        print(1, "Bochner-Kodaira, m in {1,2,3}, 50 seeds", l);
    }
    {
        const CommandResult r = identities({"k1"}, 50, {2});
        reports.push_back(canonical_dump(r.report));
        const double res = max_field(r.report, "lemma_k1", "rel_residual");
        const double med = r.report["results"]["control_median"]["lemma_k1"].get<double>();
        Line l;
        l.require(all_pass(r.report) && res <= kK1Tol && med > kK1Control);
        l.text << "max rel " << sci(res) << " <= " << sci(kK1Tol) << ", control (no gauge) median " << sci(med)
               << " > " << sci(kK1Control);
        print(2, "gauge-fixed deformation identity, m = 2, 50 seeds", l);
    }
    {
        const CommandResult r = identities({"prop6", "theorem_e"}, 25, {1, 2});
        reports.push_back(canonical_dump(r.report));
        const double p7 = max_field(r.report, "prop6", "rel_residual");
        const double p1 = max_field(r.report, "theorem_e", "rel_residual");
        const double p9 = max_detail(r.report, "theorem_e", "p9");
        double helpers = 0;
        for (const char* k : {"c1", "c2", "c3", "c4"}) {
            helpers = std::max(helpers, max_detail(r.report, "theorem_e", k));
        }
        const double med = r.report["results"]["control_median"]["theorem_e"].get<double>();
        Line l;
        l.require(all_pass(r.report) && p7 <= kProp6Tol && p1 <= kRicciFormTol && p9 <= kRicciFormTol &&
                  helpers <= kHelperTol && med > kRicciFormControl);
        l.text << "deformed metric " << sci(p7) << " <= " << sci(kProp6Tol) << ", Ricci form " << sci(p1)
               << " and volume split " << sci(p9) << " <= " << sci(kRicciFormTol) << ", helpers c1-c4 " << sci(helpers)
               << " <= " << sci(kHelperTol) << ", control (no divergence_free) median " << sci(med) << " > "
               << sci(kRicciFormControl);
        print(3, "deformed metric and Ricci form, m in {1,2}, 25 seeds", l);
    }
    {
        const CommandResult r = identities({"linearization"}, 25, {2}, false);
        reports.push_back(canonical_dump(r.report));
        const double s = max_field(r.report, "scalar_linearization", "rel_residual");
        const double v = max_field(r.report, "ricci_volume_variation", "rel_residual");
        Line l;
        l.require(all_pass(r.report) && s <= kLinearizationTol && v <= kLinearizationTol);
        l.text << "scalar curvature " << sci(s) << ", Ricci potential " << sci(v) << " <= " << sci(kLinearizationTol);
        print(4, "first variations, m = 2, 25 seeds", l);
    }
    {
        SpectrumConfig c;
        const CommandResult r = run_spectrum(c);
        reports.push_back(canonical_dump(r.report));
        const json& res = r.report["results"];
        const auto mult = res["cluster_multiplicities"].get<std::vector<int>>();
        const bool mult_ok = mult.size() >= 4 && mult[0] == 1 && mult[1] == 3 && mult[2] == 5 && mult[3] == 7;
        const double fs = result(r.report, "fs_error");
        const double tw = result(r.report, "intertwining");
        const double l1 = result(r.report, "lambda1_forms");
        const double l0 = result(r.report, "lambda1_functions");
        Line l;
        l.require(fs <= kSpectrumTol && mult_ok && tw <= kSpectrumTol && l1 <= l0 + 1e-12 &&
                  seconds(r.report) <= kFsSeconds);
        l.text << "max |lambda - l(l+1)/2| " << sci(fs) << ", multiplicities " << mult[0] << "," << mult[1] << ","
               << mult[2] << "," << mult[3] << ", (0,1) vs functions " << sci(tw) << " <= " << sci(kSpectrumTol)
               << ", lambda1(forms) - lambda1(functions) = " << sci(l1 - l0) << ", " << fixed(seconds(r.report))
               << " s <= " << kFsSeconds << " s";
        print(5, "Fubini-Study spectrum on CP1, N = 12", l);
    }
    {
        Line l6;
        Line l7;
        double lmin = 1e300;
        double hol = 0;
        double eig = 0;
        double ratio = 1e300;
        double pair = 0;
        int draws = 0;
        bool mult3 = true;
        for (const char* spec : {"", "eps=0.05,mode=quad", "eps=0.1,mode=quad", "eps=0.05,mode=sect", "eps=0.1,mode=sect"}) {
            SpectrumConfig c;
            c.perturb = spec;
            c.form_draws = 100;
            c.pairing_draws = 25;
            const CommandResult r = run_spectrum(c);
            reports.push_back(canonical_dump(r.report));
            ratio = std::min(ratio, result(r.report, "form_min_ratio"));
            pair = std::max(pair, result(r.report, "pairing_max_residual"));
            draws += c.form_draws;
            if (std::string(spec).empty()) {
                continue;
            }
            lmin = std::min({lmin, result(r.report, "lambda1_functions"), result(r.report, "lambda1_forms")});
            hol = std::max(hol, result(r.report, "holomorphy_max"));
            eig = std::max(eig, result(r.report, "eigenform_max"));
            mult3 = mult3 && r.report["results"]["unit_multiplicity"].get<int>() == 3;
        }
        l6.require(lmin >= 1 - kUnitEigenTol && mult3 && hol <= kHolomorphyTol && eig <= kEigenformTol);
        l6.text << "min nonzero eigenvalue " << fixed(1) << " - " << sci(1 - lmin) << " >= 1 - " << sci(kUnitEigenTol)
                << ", eigenvalue-1 multiplicity " << (mult3 ? "3" : "not 3") << ", holomorphy " << sci(hol)
                << " <= " << sci(kHolomorphyTol) << ", eigenform " << sci(eig) << " <= " << sci(kEigenformTol);
        print(6, "perturbed CP1, eps in {0.05,0.1}, quad and sect modes", l6);
        l7.require(ratio >= -kFormTol && pair <= kPairingTol);
        l7.text << draws << " draws over 5 metrics, min <psi,psi>/||psi||^2 " << sci(ratio) << " >= -" << sci(kFormTol)
                << ", moment map residual " << sci(pair) << " <= " << sci(kPairingTol) << " (25 pairs per metric)";
        print(7, "Hermitian form and moment map pairing", l7);
    }
    {
        const CommandResult r = identities({"coupled"}, 25, {2}, false);
        reports.push_back(canonical_dump(r.report));
        const double k2 = max_field(r.report, "coupled_bochner_kodaira", "rel_residual", "k=2");
        const double k1 = max_field(r.report, "coupled_bochner_kodaira", "rel_residual", "k=1");
        Line l;
        l.require(all_pass(r.report) && k2 <= kCoupledTol && k1 <= kBochnerTol &&
                  count(r.report, "coupled_bochner_kodaira", "k=2") == 50);
        l.text << "k = 2, q in {0,1}: " << sci(k2) << " <= " << sci(kCoupledTol) << ", k = 1 reduction " << sci(k1)
               << " <= " << sci(kBochnerTol);
        print(8, "coupled Bochner-Kodaira, m = 2, 25 seeds", l);
    }
    {
        Line l;
        double secs = 0;
        auto run = [&](KuranishiConfig c) {
            const CommandResult r = run_kuranishi(c);
            reports.push_back(canonical_dump(r.report));
            secs += seconds(r.report);
            return r;
        };
        const CommandResult three = run({"three_element", "", 8, ""});
        const json& phi = three.report["results"]["solution"]["phi"]["terms"];
        const bool exact = phi.size() == 2 && phi[0]["index"] == json{1} && phi[0]["vector"] == json{"1", "0"} &&
                           phi[1]["index"] == json{2} && phi[1]["vector"] == json{"0", "1"};
        const bool zero = three.report["results"]["solution"]["mc_residual"]["zero"].get<bool>() &&
                          three.report["results"]["solution"]["gauge_residual"]["zero"].get<bool>();
        const CommandResult ab = run({"abelian", "", 5, ""});
        const json& abt = ab.report["results"]["solution"]["phi"]["terms"];
        bool linear = ab.exit_code == kExitPass;
        for (const auto& t : abt) {
            int deg = 0;
            for (int e : t["index"]) {
                deg += e;
            }
            linear = linear && deg == 1;
        }
        const CommandResult ob = run({"obstructed", "", 8, "order=2"});
        const json& obs = ob.report["results"]["solution"]["obstruction"];
        const bool obstructed = ob.exit_code == kExitPass && !obs.is_null() && obs["order"] == 2;
        l.require(exact && zero && three.exit_code == kExitPass && linear && obstructed && secs <= kKuranishiSeconds);
        l.text << "three-element phi = t e1 + t^2 e2: " << (exact ? "yes" : "no") << ", MC and gauge residual zero through 8: "
               << (zero ? "yes" : "no") << ", abelian linear: " << (linear ? "yes" : "no")
               << ", obstruction at order " << (obs.is_null() ? json("none").dump() : obs["order"].dump()) << ", "
               << fixed(secs) << " s <= " << kKuranishiSeconds << " s";
        print(9, "Kuranishi series in exact arithmetic", l);
    }
    {
        // second pass over every configuration above, compared byte for byte
        std::vector<std::string> again;
        again.push_back(canonical_dump(identities({"bochner"}, 50, {}, false).report));
        again.push_back(canonical_dump(identities({"k1"}, 50, {2}).report));
        again.push_back(canonical_dump(identities({"prop6", "theorem_e"}, 25, {1, 2}).report));
        again.push_back(canonical_dump(identities({"linearization"}, 25, {2}, false).report));
        again.push_back(canonical_dump(run_spectrum({}).report));
        for (const char* spec : {"", "eps=0.05,mode=quad", "eps=0.1,mode=quad", "eps=0.05,mode=sect", "eps=0.1,mode=sect"}) {
            SpectrumConfig c;
            c.perturb = spec;
            c.form_draws = 100;
            c.pairing_draws = 25;
            again.push_back(canonical_dump(run_spectrum(c).report));
        }
        again.push_back(canonical_dump(identities({"coupled"}, 25, {2}, false).report));
        again.push_back(canonical_dump(run_kuranishi({"three_element", "", 8, ""}).report));
        again.push_back(canonical_dump(run_kuranishi({"abelian", "", 5, ""}).report));
        again.push_back(canonical_dump(run_kuranishi({"obstructed", "", 8, "order=2"}).report));
        int same = 0;
        for (std::size_t i = 0; i < std::min(reports.size(), again.size()); ++i) {
            same += reports[i] == again[i] ? 1 : 0;
        }
        const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        Line l;
        l.require(reports.size() == again.size() && same == static_cast<int>(reports.size()) && total <= kTotalSeconds);
        l.text << same << "/" << reports.size() << " reports byte-identical without timestamp, default suite run twice in "
               << fixed(total) << " s <= " << kTotalSeconds << " s";
        print(10, "reproducibility and runtime", l);
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
