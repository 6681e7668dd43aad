#include "fanolab/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace fanolab::cli;

namespace {

int emit(const CommandResult& r, const std::string& out, const std::string& command)
{
    std::filesystem::path path;
    if (!out.empty()) {
        path = resolve_output(out);
    } else if (const auto dir = default_out_dir()) {
        path = *dir / (command + ".json");
    }
    const std::string text = r.report.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text(path, text);
        const json& s = r.report["summary"];
        std::cerr << command << ": " << s["passed"].get<int>() << "/" << s["total"].get<int>() << " checks passed, report "
                  << path.string() << "\n";
    }
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical and exact checks for weighted Hodge theory on Fano manifolds"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", tool_version());
    std::string out;
    app.add_option("-o,--out", out, "JSON report path (default: $FANOLAB_OUT_DIR/<command>.json, else stdout)");

    IdentitiesConfig ic;
    std::string seeds = "50";
    auto* id = app.add_subcommand("identities", "Jet-level identity checks over random seeds");
    id->add_option("--suite", ic.suites, "Suites to run, or all")
        ->check(CLI::IsMember([] {
            auto s = identity_suites();
            s.push_back("all");
            return s;
        }()))
        ->delimiter(',');
    id->add_option("--m", ic.m, "Complex dimensions (default per suite)")->delimiter(',');
    id->add_option("--seeds", seeds, "Seed count N (1..N), range a:b, or list a,b,c")->capture_default_str();
    id->add_flag("--control", ic.control, "Also run each check with one hypothesis dropped");
    id->add_option("--tolerance", ic.tolerance, "Override the per-identity tolerance (<= 0 keeps defaults)");
    id->add_option("--jobs", ic.jobs, "Worker threads")->capture_default_str();

    SpectrumConfig sc;
    auto* sp = app.add_subcommand("spectrum", "Weighted dbar-Laplacian spectrum on CP1");
    sp->add_option("--manifold", sc.manifold, "Manifold (cp1)")->capture_default_str();
    sp->add_option("--basis", sc.basis, "Basis degree N")->capture_default_str();
    sp->add_option("--perturb", sc.perturb, "Potential perturbation, e.g. eps=0.1,mode=quad");
    sp->add_option("--normalization", sc.normalization, "kahler_class or reference")->capture_default_str();
    sp->add_option("--compare", sc.compare, "Eigenvalues compared against closed forms")->capture_default_str();
    sp->add_option("--form-draws", sc.form_draws, "Random tangent vectors for the Hermitian form");
    sp->add_option("--pairing-draws", sc.pairing_draws, "Random (u, v) pairs for the moment map");
    sp->add_option("--seed", sc.seed, "Seed for the random draws")->capture_default_str();
    sp->add_option("--csv", sc.csv, "Function eigenvalue table");
    sp->add_option("--forms-csv", sc.forms_csv, "(0,1)-form eigenvalue table");
    sp->add_option("--plot", sc.plot, "SVG convergence plot");

    KuranishiConfig kc;
    auto* ku = app.add_subcommand("kuranishi", "Exact Kuranishi series on a finite DGLA");
    ku->add_option("--builtin", kc.builtin, "abelian, three_element or obstructed");
    ku->add_option("--file", kc.file, "DGLA JSON file");
    ku->add_option("--order", kc.order, "Truncation order")->capture_default_str();
    ku->add_option("--expect-obstruction", kc.expect_obstruction, "order=K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    try {
        if (*id) {
            ic.seeds = parse_seeds(seeds);
            return emit(run_identities(ic), out, "identities");
        }
        if (*sp) {
            return emit(run_spectrum(sc), out, "spectrum");
        }
        return emit(run_kuranishi(kc), out, "kuranishi");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
