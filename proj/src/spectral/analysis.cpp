#include "fanolab/spectral/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fanolab::spectral {

double fs_eigenvalue(int i)
{
    const int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(i)) + 1e-12));
    return 0.5 * l * (l + 1);
}

namespace {

QuadratureGrid grid_for(const PerturbationSpec& spec, const AnalysisOptions& opt)
{
    if (opt.n_radial > 0 && opt.n_angular > 0) {
        return build_grid(opt.n_radial, opt.n_angular);
    }
    return default_grid(opt.basis_degree, spec.eps != 0 && spec.mode != PerturbationMode::round);
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

} // namespace

Cp1Analysis analyze_cp1(const PerturbationSpec& spec, const AnalysisOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    Cp1Analysis a;
    a.spec = spec;
    a.options = opt;
    QuadratureGrid grid = grid_for(spec, opt);
    MetricOnGrid metric = perturb_metric(grid, spec, opt.normalization);
    a.nodes = static_cast<int>(grid.size());
    a.relation_residual = metric.relation_residual;
    a.volume_defect = std::abs(grid.volume() - 4.0 * M_PI);
    const Discretization d(std::move(grid), make_basis(opt.basis_degree), std::move(metric));

    a.functions = solve_pencil(assemble_laplacian_functions(d), opt.cluster_tolerance);
    a.forms01 = solve_pencil(assemble_laplacian_01forms(d), opt.cluster_tolerance);
    const auto& fe = a.functions.eigenvalues;
    const auto& ge = a.forms01.eigenvalues;
    for (double r : a.functions.residuals) {
        a.max_eigen_residual = std::max(a.max_eigen_residual, r);
    }
    for (double r : a.forms01.residuals) {
        a.max_eigen_residual = std::max(a.max_eigen_residual, r);
    }

    a.zero_multiplicity = a.functions.multiplicity.front();
    a.lambda1_functions = fe[static_cast<std::size_t>(a.zero_multiplicity)];
    a.lambda1_forms = ge.front();
    const int n = std::min({opt.compare_count, static_cast<int>(ge.size()), static_cast<int>(fe.size()) - 1});
    for (int i = 0; i < n; ++i) {
        a.intertwining = std::max(a.intertwining, std::abs(ge[static_cast<std::size_t>(i)] - fe[static_cast<std::size_t>(i + 1)]));
    }
    if (spec.eps == 0 || spec.mode == PerturbationMode::round) {
        double e = 0;
        for (int i = 0; i <= std::min(opt.compare_count, static_cast<int>(fe.size()) - 1); ++i) {
            e = std::max(e, std::abs(fe[static_cast<std::size_t>(i)] - fs_eigenvalue(i)));
        }
        a.fs_error = e;
    }

    const std::vector<int> unit = a.functions.cluster_near(1.0);
    if (!unit.empty() && std::abs(fe[static_cast<std::size_t>(unit.front())] - 1.0) <= opt.cluster_tolerance) {
        a.unit_multiplicity = static_cast<int>(unit.size());
        for (int i : unit) {
            a.holomorphy_max = std::max(a.holomorphy_max, holomorphy_residual(d, a.functions.vectors.col(i)));
        }
        const std::size_t next = static_cast<std::size_t>(unit.back()) + 1;
        if (next < fe.size()) {
            a.holomorphy_next = holomorphy_residual(d, a.functions.vectors.col(static_cast<Eigen::Index>(next)));
        }
    }
    const std::vector<int> unit_forms = a.forms01.cluster_near(1.0);
    for (int i : unit_forms) {
        if (std::abs(ge[static_cast<std::size_t>(i)] - 1.0) <= opt.cluster_tolerance) {
            a.eigenform_max = std::max(a.eigenform_max, eigenform_residual(d, a.forms01.vectors.col(i)));
        }
    }

    if (opt.form_draws > 0) {
        auto rng = rng_for(opt.seed, 1);
        const FunctionSolver solver(d);
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < opt.form_draws; ++k) {
            const FormG g = hermitian_form_G(d, solver, random_tangent(d, rng));
            worst = std::min(worst, g.value / g.psi_norm2);
        }
        a.form_min_ratio = worst;
    }
    if (opt.pairing_draws > 0) {
        auto rng = rng_for(opt.seed, 2);
        double worst = 0;
        for (int k = 0; k < opt.pairing_draws; ++k) {
            const Eigen::VectorXcd v = random_real_function(d, rng);
            const Eigen::VectorXcd u = random_real_function(d, rng);
            worst = std::max(worst, moment_map_pairing(d, v, u).residual);
        }
        a.pairing_max_residual = worst;
    }
    a.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return a;
}

std::vector<ConvergencePoint> convergence_study(const PerturbationSpec& spec, const std::vector<int>& degrees,
                                                int count)
{
    if (degrees.empty()) {
        return {};
    }
    const bool round = spec.eps == 0 || spec.mode == PerturbationMode::round;
    std::vector<std::vector<double>> ev;
    for (int N : degrees) {
        AnalysisOptions opt;
        opt.basis_degree = N;
        QuadratureGrid grid = grid_for(spec, opt);
        MetricOnGrid metric = perturb_metric(grid, spec);
        const Discretization d(std::move(grid), make_basis(N), std::move(metric));
        ev.push_back(solve_pencil(assemble_laplacian_functions(d)).eigenvalues);
    }
    const int top = *std::max_element(degrees.begin(), degrees.end());
    const std::size_t ref = static_cast<std::size_t>(std::find(degrees.begin(), degrees.end(), top) - degrees.begin());
    std::vector<ConvergencePoint> out;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        if (!round && k == ref) {
            continue;
        }
        const std::size_t n = std::min(static_cast<std::size_t>(count) + 1, ev[k].size());
        double e = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double exact = round ? fs_eigenvalue(static_cast<int>(i)) : ev[ref][i];
            e = std::max(e, std::abs(ev[k][i] - exact));
        }
        out.push_back({degrees[k], e});
    }
    return out;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s)
{
    os << "index,value,cluster,residual\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        os << i << ',' << s.eigenvalues[i] << ',' << s.cluster[i] << ',' << s.residuals[i] << '\n';
    }
}

std::string convergence_svg(const std::vector<ConvergencePoint>& points, const std::string& title)
{
    const double w = 640;
    const double h = 400;
    const double left = 70;
    const double right = 20;
    const double top = 40;
    const double bottom = 50;
    int nmin = 0;
    int nmax = 1;
    double emin = -16;
    double emax = 0;
    if (!points.empty()) {
        nmin = points.front().N;
        nmax = points.front().N;
        emin = 1e300;
        emax = -1e300;
        for (const auto& p : points) {
            nmin = std::min(nmin, p.N);
            nmax = std::max(nmax, p.N);
            const double le = std::log10(std::max(p.error, 1e-16));
            emin = std::min(emin, le);
            emax = std::max(emax, le);
        }
        emin = std::floor(emin);
        emax = std::ceil(emax);
        if (emax <= emin) {
            emax = emin + 1;
        }
        if (nmax == nmin) {
            nmax = nmin + 1;
        }
    }
    auto x = [&](double n) { return left + (n - nmin) / (nmax - nmin) * (w - left - right); };
    auto y = [&](double le) { return top + (emax - le) / (emax - emin) * (h - top - bottom); };

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
       << "\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(emin); e <= static_cast<int>(emax); ++e) {
        os << "<line x1=\"" << left - 4 << "\" y1=\"" << y(e) << "\" x2=\"" << w - right << "\" y2=\"" << y(e)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << y(e) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e << "</text>\n";
    }
    for (const auto& p : points) {
        os << "<text x=\"" << x(p.N) << "\" y=\"" << h - bottom + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << p.N << "</text>\n";
    }
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">basis degree N</text>\n";
    os << "<text x=\"16\" y=\"" << h / 2 << "\" transform=\"rotate(-90 16 " << h / 2
       << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">max eigenvalue error</text>\n";
    if (!points.empty()) {
        os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        for (const auto& p : points) {
            os << x(p.N) << ',' << y(std::log10(std::max(p.error, 1e-16))) << ' ';
        }
        os << "\"/>\n";
        for (const auto& p : points) {
            os << "<circle cx=\"" << x(p.N) << "\" cy=\"" << y(std::log10(std::max(p.error, 1e-16)))
               << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace fanolab::spectral
