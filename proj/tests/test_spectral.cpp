// Signs, index placement and formats follow docs/conventions.md.

#include "fanolab/kahler/operators.hpp"
#include "fanolab/spectral/analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fanolab;
using namespace fanolab::spectral;

namespace {

constexpr double kPi = std::numbers::pi;

const Discretization& fs12()
{
    static const Discretization d = [] {
        QuadratureGrid grid = default_grid(12, false);
        MetricOnGrid m = perturb_metric(grid, {});
        return Discretization(std::move(grid), make_basis(12), std::move(m));
    }();
    return d;
}

const Discretization& quad10()
{
    static const Discretization d = [] {
        QuadratureGrid grid = default_grid(12, true);
        MetricOnGrid m = perturb_metric(grid, {0.1, PerturbationMode::quadrupole});
        return Discretization(std::move(grid), make_basis(12), std::move(m));
    }();
    return d;
}

Eigen::VectorXcd unit(int k, int n)
{
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    c(k) = 1;
    return c;
}

int basis_index(int N, int a, int b)
{
    return a * (N + 1) + b;
}

} // namespace

TEST_CASE("quadrature grid")
{
    const QuadratureGrid g = build_grid(10, 12);
    CHECK(g.size() == 120);
    CHECK(g.exactness == 11);
    CHECK(std::abs(g.volume() - 4 * kPi) <= 1e-12);
    double su = 0;
    double su18 = 0;
    double cos11 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        su += g.weight[i] * g.u[i];
        su18 += g.weight[i] * std::pow(g.u[i], 18);
        cos11 += g.weight[i] * std::cos(11 * g.theta[i]);
    }
    CHECK(std::abs(su) <= 1e-13);
    // int u^18 du dtheta = 2 pi * 2/19
    CHECK(std::abs(su18 - 4 * kPi / 19) <= 1e-13);
    CHECK(std::abs(cos11) <= 1e-13);
    CHECK_THROWS_AS(build_grid(3, 12), ShapeError);
}

TEST_CASE("Gram matrix against Beta integrals")
{
    // int z^p zbar^q s^-2N omega = delta_{pq} 4 pi B(p+1, 2N+1-p)
    const int N = 12;
    QuadratureGrid grid = default_grid(N, false);
    MetricOnGrid m = perturb_metric(grid, {});
    const Discretization raw(std::move(grid), make_basis(N, false), std::move(m));
    const Pencil p = assemble_laplacian_functions(raw);
    double worst = 0;
    for (int k = 0; k < raw.basis().size(); ++k) {
        for (int l = 0; l < raw.basis().size(); ++l) {
            const auto [a, b] = raw.basis().index[static_cast<std::size_t>(l)];
            const auto [c, e] = raw.basis().index[static_cast<std::size_t>(k)];
            // B_{kl} = <b_l, b_k>: z^(a+e) zbar^(b+c)
            double want = 0;
            if (a + e == b + c) {
                const int q = a + e;
                want = 4 * kPi * std::beta(q + 1.0, 2.0 * N + 1 - q);
            }
            worst = std::max(worst, std::abs(p.B(k, l) - want));
        }
    }
    CHECK(worst <= 1e-14);

    // the working basis is orthonormal
    const Pencil q = assemble_laplacian_functions(fs12());
    const auto k = q.B.rows();
    CHECK((q.B - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("rational functions: derivatives against finite differences and jets")
{
    const SphereFunction f = SphereFunction::term(cd(0.3, 0.2), 2, 1, 3) + SphereFunction::term(1.5, 0, 2, 2) +
                             SphereFunction::height();
    const cd z0(0.4, -0.7);
    const double h = 1e-5;
    auto fx = [&](double dx, double dy) { return f(z0 + cd(dx, dy)); };
    const cd fxd = (fx(h, 0) - fx(-h, 0)) / (2 * h);
    const cd fyd = (fx(0, h) - fx(0, -h)) / (2 * h);
    CHECK(std::abs(f.d(false)(z0) - 0.5 * (fxd - cd(0, 1) * fyd)) <= 1e-9);
    CHECK(std::abs(f.d(true)(z0) - 0.5 * (fxd + cd(0, 1) * fyd)) <= 1e-9);

    const Jet j = f.taylor(z0, 4);
    CHECK(std::abs(j.coeff({1, 1}) - f.derivative(1, 1)(z0)) <= 1e-13);
    CHECK(std::abs(j.coeff({2, 1}) * 2.0 - f.derivative(2, 1)(z0)) <= 1e-12);
    CHECK(std::abs(f.conj()(z0) - std::conj(f(z0))) <= 1e-15);
    CHECK(std::abs((f * f)(z0) - f(z0) * f(z0)) <= 1e-14);
}

TEST_CASE("perturbed metrics")
{
    SUBCASE("eps = 0 is Fubini-Study with f = 0")
    {
        const QuadratureGrid g = build_grid(12, 16);
        const MetricOnGrid m = perturb_metric(g, {});
        double fmax = 0;
        for (const auto& f : m.f) {
            fmax = std::max(fmax, f.max_abs());
        }
        CHECK(fmax <= 1e-13);
        CHECK(m.relation_residual <= 1e-12);
        CHECK(std::abs(m.sbar - 1.0) <= 1e-12);
    }
    SUBCASE("eps = 0.1 quadrupole")
    {
        const QuadratureGrid g = default_grid(12, true);
        const MetricOnGrid m = perturb_metric(g, {0.1, PerturbationMode::quadrupole});
        CHECK(m.g.minCoeff() > 0);
        CHECK(std::abs(m.weighted.sum() - 4 * kPi) <= 1e-12);
        CHECK(std::abs(m.omega.sum() - 4 * kPi) <= 1e-12);
        CHECK(m.relation_residual <= 1e-8);
        const MetricOnGrid r = perturb_metric(g, {0.1, PerturbationMode::quadrupole}, VolumeNormalization::reference);
        CHECK(std::abs(r.weighted.sum() - g.volume()) <= 1e-12);
    }
    SUBCASE("eps beyond the positivity threshold")
    {
        // g' = g0 (1 - 3 eps Y) with max Y = 1
        const QuadratureGrid g = build_grid(16, 16);
        try {
            perturb_metric(g, {0.5, PerturbationMode::quadrupole});
            FAIL("expected NotAMetricError");
        } catch (const NotAMetricError& e) {
            CHECK(std::string(e.what()).find("node") != std::string::npos);
        }
    }
    SUBCASE("parsing")
    {
        const PerturbationSpec s = parse_perturbation("eps=0.1,mode=quad");
        CHECK(s.eps == 0.1);
        CHECK(s.mode == PerturbationMode::quadrupole);
        CHECK(parse_perturbation(" eps = 0.05 , mode = sect ").mode == PerturbationMode::sectoral);
        CHECK_THROWS_AS(parse_perturbation("eps=abc"), std::invalid_argument);
        CHECK_THROWS_AS(parse_perturbation("mode=hexa"), std::invalid_argument);
        CHECK_THROWS_AS(parse_perturbation("amp=1"), std::invalid_argument);
        CHECK(parse_perturbation(to_string(s)).eps == 0.1);
    }
}

TEST_CASE("weighted dbar* is the adjoint of dbar on the grid")
{
    // kahler::dbar_star_f evaluated from node jets against <dbar u, eta>_f.
    const Discretization& d = quad10();
    const MetricOnGrid& m = d.metric();
    const SphereFunction u = SphereFunction::term(cd(0.2, 1.0), 2, 1, 3) + SphereFunction::height();
    const SphereFunction eta = SphereFunction::term(1.0, 2, 0, 3) + SphereFunction::term(cd(0.3, 0.0), 1, 1, 3) +
                               SphereFunction::term(cd(0.0, -0.2), 0, 0, 3);
    const SphereFunction k0 = SphereFunction::constant(0);
    cd lhs = 0;
    cd rhs = 0;
    const auto ub = u.d(true).evaluate(d.grid().z);
    const auto uv = u.evaluate(d.grid().z);
    for (std::size_t n = 0; n < d.nodes(); ++n) {
        const cd z0 = d.grid().z[n];
        const Jet zj = Jet::variable(1, 4, z(0)) + z0;
        const Jet zbj = Jet::variable(1, 4, zbar(0)) + std::conj(z0);
        Jet pot = log(1.0 + zj * zbj) * cd(2.0) + m.potential.taylor(z0, 4);
        const MetricJet g = metric_from_potential(real_part(pot));
        WeightJet f{m.f[n].truncated(2)};
        f.f = real_part(f.f);
        FormJet e = make_form(1, 0, 1, 2);
        e.at({0}) = eta.taylor(z0, 2);
        const cd star = dbar_star_f(e, connection(g, f)).value().value();
        const auto i = static_cast<Eigen::Index>(n);
        lhs += m.weighted(i) / m.g(i) * ub(i) * std::conj(e.at({0}).value());
        rhs += m.weighted(i) * uv(i) * std::conj(star);
    }
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs));
    CHECK(std::abs(lhs) > 1e-2);
}

TEST_CASE("Fubini-Study spectrum")
{
    const Discretization& d = fs12();
    const SpectrumResult s = solve_pencil(assemble_laplacian_functions(d));
    REQUIRE(s.eigenvalues.size() == 169);
    for (int i = 0; i <= 15; ++i) {
        CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(i)] - fs_eigenvalue(i)) <= 1e-6);
    }
    CHECK(s.multiplicity[0] == 1);
    CHECK(s.multiplicity[1] == 3);
    CHECK(s.multiplicity[2] == 5);
    CHECK(s.multiplicity[3] == 7);
    for (double r : s.residuals) {
        CHECK(r <= 1e-8);
    }
    // the constant function is in the kernel of A
    const Pencil p = assemble_laplacian_functions(d);
    CHECK((p.A * d.basis().constant_coefficients()).norm() <= 1e-10);

    const SpectrumResult f = solve_pencil(assemble_laplacian_01forms(d));
    CHECK(std::abs(f.eigenvalues[0] - 1.0) <= 1e-6);
    CHECK(f.multiplicity[0] == 3);
    for (std::size_t i = 0; i < 15; ++i) {
        CHECK(std::abs(f.eigenvalues[i] - s.eigenvalues[i + 1]) <= 1e-6);
    }
    CHECK(f.eigenvalues[0] <= s.eigenvalues[1] + 1e-9);
    for (int i : f.cluster_near(1.0)) {
        CHECK(eigenform_residual(d, f.vectors.col(i)) <= 1e-6);
    }
}

TEST_CASE("holomorphy residual")
{
    const Discretization& d = fs12();
    SUBCASE("grad' of the height is z d_z")
    {
        const SphereFunction height = SphereFunction::height();
        const Eigen::VectorXcd x = height.d(true).evaluate(d.grid().z).cwiseQuotient(d.metric().g.cast<cd>());
        double worst = 0;
        for (std::size_t i = 0; i < d.nodes(); ++i) {
            const cd zi = d.grid().z[i];
            worst = std::max(worst, std::abs(x(static_cast<Eigen::Index>(i)) - zi) / std::pow(1 + std::abs(zi), 2));
        }
        CHECK(worst <= 1e-13);
    }
    SUBCASE("l = 1 eigenfunctions are holomorphy potentials, l = 2 are not")
    {
        const SpectrumResult s = solve_pencil(assemble_laplacian_functions(d));
        for (int i : s.cluster_near(1.0)) {
            CHECK(holomorphy_residual(d, s.vectors.col(i)) <= 1e-6);
        }
        for (int i : s.cluster_near(3.0)) {
            CHECK(holomorphy_residual(d, s.vectors.col(i)) > 0.5);
        }
        CHECK_THROWS_AS(holomorphy_residual(d, d.basis().constant_coefficients()), SingularError);
    }
}

TEST_CASE("perturbed quadrupole metric: lambda1 >= 1 and holomorphic eigenfunctions")
{
    const Discretization& d = quad10();
    const SpectrumResult s = solve_pencil(assemble_laplacian_functions(d));
    CHECK(s.multiplicity[0] == 1);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
        CHECK(s.eigenvalues[i] >= 1 - 1e-6);
    }
    const auto one = s.cluster_near(1.0);
    CHECK(one.size() == 3);
    for (int i : one) {
        CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(i)] - 1.0) <= 1e-8);
        CHECK(holomorphy_residual(d, s.vectors.col(i)) <= 1e-5);
    }
    const SpectrumResult f = solve_pencil(assemble_laplacian_01forms(d));
    CHECK(f.eigenvalues[0] >= 1 - 1e-6);
    for (int i : f.cluster_near(1.0)) {
        CHECK(eigenform_residual(d, f.vectors.col(i)) <= 1e-6);
    }
    for (std::size_t i = 0; i < 15; ++i) {
        CHECK(std::abs(f.eigenvalues[i] - s.eigenvalues[i + 1]) <= 1e-6);
    }
}

TEST_CASE("xi_psi")
{
    const Discretization& d = fs12();
    const Pairings pr{d};
    const FunctionSolver solver(d);
    const int n = d.basis().size();
    SUBCASE("psi = 0")
    {
        const XiResult x = xi_psi(d, solver, Tangent{Eigen::VectorXcd::Zero(n)});
        CHECK(x.coefficients.norm() == doctest::Approx(0.0));
        CHECK(x.residual == 0.0);
    }
    SUBCASE("substitution: div_f dbar grad' v = dbar(v - Delta_f v)")
    {
        // v = b_{22} + b_{22}bar is real
        const Eigen::VectorXcd v = unit(basis_index(12, 2, 3), n) + unit(basis_index(12, 3, 2), n);
        const XiResult x = xi_psi(d, solver, Tangent{v});
        Eigen::VectorXcd want = d.derivative(v, 0, 0) - ops::laplacian(d, v);
        want -= Eigen::VectorXcd::Constant(want.size(), pr.functions(want, Eigen::VectorXcd::Ones(want.size())) /
                                                            d.metric().weighted.sum());
        const Eigen::VectorXcd e = x.values - want;
        CHECK(std::sqrt(pr.functions(e, e).real() / pr.functions(want, want).real()) <= 1e-6);
        CHECK(x.residual <= 1e-6);
        CHECK(x.mean <= 1e-10);
    }
}

TEST_CASE("Hermitian form on the tangent space")
{
    for (const Discretization* d : {&fs12(), &quad10()}) {
        const FunctionSolver solver(*d);
        const int n = d->basis().size();
        CHECK(hermitian_form_G(*d, solver, Tangent{Eigen::VectorXcd::Zero(n)}).value == 0.0);
        std::mt19937_64 rng(7);
        for (int k = 0; k < 20; ++k) {
            const FormG g = hermitian_form_G(*d, solver, random_tangent(*d, rng));
            CHECK(g.value >= -1e-10 * g.psi_norm2);
        }
        // psi = dbar of a holomorphic field: the l = 1 eigenfunctions
        const SpectrumResult s = solve_pencil(assemble_laplacian_functions(*d));
        for (int i : s.cluster_near(1.0)) {
            const Tangent t{s.vectors.col(i)};
            const FormG g = hermitian_form_G(*d, solver, t);
            const Eigen::VectorXcd x = ops::grad(*d, t.potential);
            const double scale = Pairings{*d}.vectors(x, x).real();
            CHECK(g.psi_norm2 <= 1e-16 * scale);
            CHECK(std::abs(g.value) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("moment map pairing")
{
    for (const Discretization* d : {&fs12(), &quad10()}) {
        const int n = d->basis().size();
        const MomentPairing zero = moment_map_pairing(*d, d->basis().constant_coefficients(),
                                                      unit(basis_index(12, 1, 1), n));
        CHECK(std::abs(zero.lhs) <= 1e-10);
        CHECK(std::abs(zero.rhs) <= 1e-10);
        std::mt19937_64 rng(3);
        for (int k = 0; k < 5; ++k) {
            const Eigen::VectorXcd u = random_real_function(*d, rng);
            const Eigen::VectorXcd v = random_real_function(*d, rng);
            CHECK(moment_map_pairing(*d, v, u).residual <= 1e-6);
            const MomentPairing self = moment_map_pairing(*d, u, u);
            CHECK(self.rhs >= 0);
            CHECK(self.residual <= 1e-6);
        }
    }
}

TEST_CASE("convergence in the basis degree")
{
    const auto fs = convergence_study({}, {3, 4, 6});
    for (const auto& p : fs) {
        CHECK(p.error <= 1e-6);
    }
    const auto pts = convergence_study({0.1, PerturbationMode::sectoral}, {4, 6, 8, 10, 14});
    REQUIRE(pts.size() == 4);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i - 1].error > 1e-10) {
            CHECK(pts[i].error < pts[i - 1].error);
        }
    }
    const std::string svg = convergence_svg(pts, "sect");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("cluster ids")
{
    CHECK(cluster_ids({0.0, 1.0, 1.0 + 1e-7, 1.0 + 2e-7, 3.0}, 1e-5) == std::vector<int>{0, 1, 1, 1, 2});
    CHECK(cluster_ids({}, 1e-5).empty());
}
