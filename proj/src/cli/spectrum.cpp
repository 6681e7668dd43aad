#include "fanolab/cli/commands.hpp"

#include "fanolab/spectral/analysis.hpp"

#include <sstream>

namespace fanolab::cli {

namespace {

using namespace fanolab::spectral;

json head(const SpectrumResult& s, int n)
{
    json a = json::array();
    for (int i = 0; i < std::min(n, static_cast<int>(s.eigenvalues.size())); ++i) {
        const auto k = static_cast<std::size_t>(i);
        a.push_back({{"index", i}, {"value", s.eigenvalues[k]}, {"cluster", s.cluster[k]}, {"residual", s.residuals[k]}});
    }
    return a;
}

json check(const std::string& name, double value, const std::string& relation, double bound)
{
    const bool pass = relation == "<=" ? value <= bound : value >= bound;
    return {{"name", name}, {"value", value}, {"relation", relation}, {"bound", bound}, {"pass", pass}};
}

json check_int(const std::string& name, int value, int expected)
{
    return {{"name", name}, {"value", value}, {"expected", expected}, {"pass", value == expected}};
}

} // namespace

CommandResult run_spectrum(const SpectrumConfig& c)
{
    if (c.manifold != "cp1") {
        throw ConfigError("unsupported manifold \"" + c.manifold + "\" (only cp1)");
    }
    if (c.basis < 3 || c.basis > 24) {
        throw ConfigError("basis degree must be between 3 and 24");
    }
    if (c.compare < 1 || c.compare + 1 > (c.basis + 1) * (c.basis + 1)) {
        throw ConfigError("compare count does not fit the basis");
    }
    if (c.form_draws < 0 || c.pairing_draws < 0) {
        throw ConfigError("draw counts must be >= 0");
    }
    PerturbationSpec spec;
    try {
        spec = parse_perturbation(c.perturb);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad perturbation spec: ") + e.what());
    }
    AnalysisOptions opt;
    opt.basis_degree = c.basis;
    opt.compare_count = c.compare;
    opt.form_draws = c.form_draws;
    opt.pairing_draws = c.pairing_draws;
    opt.seed = c.seed;
    if (c.normalization == "kahler_class") {
        opt.normalization = VolumeNormalization::kahler_class;
    } else if (c.normalization == "reference") {
        opt.normalization = VolumeNormalization::reference;
    } else {
        throw ConfigError("normalization must be kahler_class or reference");
    }

    ReportBuilder rb("spectrum");
    rb.config() = {{"manifold", c.manifold},
                   {"basis", c.basis},
                   {"perturb", to_string(spec)},
                   {"normalization", c.normalization},
                   {"compare", c.compare},
                   {"form_draws", c.form_draws},
                   {"pairing_draws", c.pairing_draws},
                   {"seed", c.seed},
                   {"cluster_tolerance", opt.cluster_tolerance},
                   {"csv", c.csv},
                   {"forms_csv", c.forms_csv},
                   {"plot", c.plot}};

    Cp1Analysis a;
    try {
        a = analyze_cp1(spec, opt);
    } catch (const NotAMetricError& e) {
        throw ConfigError(e.what());
    }
    const bool round = spec.eps == 0 || spec.mode == PerturbationMode::round;

    json& res = rb.results();
    res["nodes"] = a.nodes;
    res["relation_residual"] = a.relation_residual;
    res["volume_defect"] = a.volume_defect;
    res["sbar"] = a.functions.sbar;
    res["condition_functions"] = a.functions.condition;
    res["condition_forms"] = a.forms01.condition;
    res["lambda1_functions"] = a.lambda1_functions;
    res["lambda1_forms"] = a.lambda1_forms;
    res["zero_multiplicity"] = a.zero_multiplicity;
    res["unit_multiplicity"] = a.unit_multiplicity;
    res["holomorphy_max"] = a.holomorphy_max;
    res["holomorphy_next"] = a.holomorphy_next;
    res["eigenform_max"] = a.eigenform_max;
    res["intertwining"] = a.intertwining;
    res["max_eigen_residual"] = a.max_eigen_residual;
    if (a.fs_error) {
        res["fs_error"] = *a.fs_error;
    }
    if (a.form_min_ratio) {
        res["form_min_ratio"] = *a.form_min_ratio;
    }
    if (a.pairing_max_residual) {
        res["pairing_max_residual"] = *a.pairing_max_residual;
    }
    std::vector<int> mult(a.functions.multiplicity.begin(),
                          a.functions.multiplicity.begin() + std::min<std::size_t>(8, a.functions.multiplicity.size()));
    res["cluster_multiplicities"] = mult;
    res["functions"] = head(a.functions, 2 * c.compare + 1);
    res["forms01"] = head(a.forms01, 2 * c.compare);

    rb.add_check(check("grid volume defect", a.volume_defect, "<=", 1e-12));
    rb.add_check(check("Ricci potential relation residual", a.relation_residual, "<=", 1e-8));
    rb.add_check(check("max eigenvector residual", a.max_eigen_residual, "<=", 1e-8));
    rb.add_check(check_int("multiplicity of eigenvalue 0", a.zero_multiplicity, 1));
    rb.add_check(check("function/form intertwining", a.intertwining, "<=", 1e-6));
    rb.add_check(check("lambda1(forms) - lambda1(functions)", a.lambda1_forms - a.lambda1_functions, "<=", 1e-9));
    rb.add_check(check("min nonzero function eigenvalue", a.lambda1_functions, ">=", 1 - 1e-6));
    rb.add_check(check("min (0,1) eigenvalue", a.lambda1_forms, ">=", 1 - 1e-6));
    rb.add_check(check_int("eigenvalue-1 multiplicity", a.unit_multiplicity, 3));
    rb.add_check(check("holomorphy residual on the eigenvalue-1 cluster", a.holomorphy_max, "<=", 1e-5));
    rb.add_check(check("eigenform residual at eigenvalue 1", a.eigenform_max, "<=", 1e-6));
    if (round) {
        rb.add_check(check("max |lambda - l(l+1)/2|", a.fs_error.value_or(1e300), "<=", 1e-6));
        const int l_max = static_cast<int>(std::floor(std::sqrt(static_cast<double>(c.compare + 1)) - 1e-12));
        for (int l = 0; l <= l_max && l < static_cast<int>(a.functions.multiplicity.size()); ++l) {
            rb.add_check(check_int("multiplicity of l(l+1)/2 at l = " + std::to_string(l),
                                   a.functions.multiplicity[static_cast<std::size_t>(l)], 2 * l + 1));
        }
        rb.add_check(check("holomorphy residual on the next cluster (power)", a.holomorphy_next, ">=", 0.1));
    }
    if (a.form_min_ratio) {
        rb.add_check(check("min <psi,psi> / ||psi||^2", *a.form_min_ratio, ">=", -1e-10));
    }
    if (a.pairing_max_residual) {
        rb.add_check(check("moment map pairing residual", *a.pairing_max_residual, "<=", 1e-6));
    }

    json outputs = json::object();
    if (!c.csv.empty()) {
        std::ostringstream os;
        write_spectrum_csv(os, a.functions);
        write_text(resolve_output(c.csv), os.str());
        outputs["csv"] = c.csv;
    }
    if (!c.forms_csv.empty()) {
        std::ostringstream os;
        write_spectrum_csv(os, a.forms01);
        write_text(resolve_output(c.forms_csv), os.str());
        outputs["forms_csv"] = c.forms_csv;
    }
    if (!c.plot.empty()) {
        std::vector<int> degrees;
        if (round) {
            for (int n = 3; n <= c.basis; ++n) {
                degrees.push_back(n);
            }
        } else {
            for (int n = 4; n <= c.basis; n += 2) {
                degrees.push_back(n);
            }
            degrees.push_back(c.basis + 4);
        }
        const auto points = convergence_study(spec, degrees, c.compare);
        json conv = json::array();
        for (const auto& p : points) {
            conv.push_back({{"N", p.N}, {"error", p.error}});
        }
        res["convergence"] = conv;
        res["convergence_reference"] = round ? json("closed form") : json(c.basis + 4);
        write_text(resolve_output(c.plot),
                   convergence_svg(points, "CP1 eigenvalue error, " + to_string(spec)));
        outputs["plot"] = c.plot;
    }
    res["outputs"] = outputs;
    return rb.finish({{"analysis_seconds", a.seconds}});
}

} // namespace fanolab::cli
