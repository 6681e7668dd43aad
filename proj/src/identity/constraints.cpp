#include "fanolab/identity/constraints.hpp"

#include "fanolab/jets/errors.hpp"
#include "fanolab/kahler/operators.hpp"

#include <cmath>
#include <numbers>

namespace fanolab {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

std::complex<double> disc_sample(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(u(rng));
    const double th = 2 * std::numbers::pi * u(rng);
    return std::polar(r, th);
}

namespace {

Jet random_disc_jet(int m, int order, std::mt19937_64& rng, int t_order = 0)
{
    Jet j(m, order, t_order);
    for (int t = 0; t <= t_order; ++t) {
        for (int k = 0; k < j.block(); ++k) {
            j.raw(k, t) = disc_sample(rng);
        }
    }
    j.set_real(false);
    return j;
}

int holomorphic_degree(const detail::MonomialLayout& lay, int idx)
{
    const auto e = lay.exponents(idx);
    int h = 0;
    for (int i = 0; i < lay.dim(); ++i) {
        h += e[static_cast<std::size_t>(i)];
    }
    return h;
}

int mixed_index(const detail::MonomialLayout& lay, int i, int j)
{
    std::vector<int> e(static_cast<std::size_t>(2 * lay.dim()), 0);
    e[static_cast<std::size_t>(i)] += 1;
    e[static_cast<std::size_t>(lay.dim() + j)] += 1;
    return lay.index(e);
}

Eigen::MatrixXcd base_ricci(const MetricJet& g)
{
    return curvature(g).ricci.value();
}

Eigen::MatrixXcd base_hessian(const WeightJet& f)
{
    const int m = f.f.dim();
    Eigen::MatrixXcd h(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            h(i, j) = f.f.raw(mixed_index(f.f.layout(), i, j));
        }
    }
    return h;
}

WeightJet set_base_hessian(WeightJet f, const Eigen::MatrixXcd& h)
{
    if (f.f.order() < 2) {
        throw DegreeError("weight needs order >= 2 for the Fano relation");
    }
    const bool real = f.f.is_real();
    for (int i = 0; i < f.f.dim(); ++i) {
        for (int j = 0; j < f.f.dim(); ++j) {
            f.f.raw(mixed_index(f.f.layout(), i, j)) = h(i, j);
        }
    }
    f.f.set_real(real);
    return f;
}

} // namespace

Background random_background(std::uint64_t seed, int m, int metric_order, int weight_order)
{
    auto rng = make_rng(seed, 1);
    Jet k = random_disc_jet(m, metric_order + 2, rng);
    const auto& lay = k.layout();
    Eigen::MatrixXcd a(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            a(i, j) = 0.2 * disc_sample(rng);
        }
    }
    const Eigen::MatrixXcd g0 = Eigen::MatrixXcd::Identity(m, m) + 0.5 * (a + a.adjoint());
    for (int n = 0; n < k.block(); ++n) {
        const int deg = lay.degree(n);
        if (deg < 2 || (deg == 2 && holomorphic_degree(lay, n) != 1)) {
            k.raw(n) = 0;
        } else if (deg > 2) {
            k.raw(n) *= 0.3;
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            k.raw(mixed_index(lay, i, j)) = g0(i, j);
        }
    }
    Background b;
    b.potential = real_part(k);
    b.g = metric_from_potential(b.potential);
    Jet f = random_disc_jet(m, weight_order, rng);
    f.raw(0) = 0;
    b.f.f = real_part(f);
    return b;
}

WeightJet fano_adjust_weight(const WeightJet& f, const MetricJet& g)
{
    return set_base_hessian(f, base_ricci(g) - g.g.value());
}

std::vector<WeightJet> fano_adjust_weights(const std::vector<WeightJet>& f, const std::vector<MetricJet>& g)
{
    if (f.size() != g.size() || g.empty()) {
        throw ShapeError("coupled data needs one weight per metric");
    }
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(g[0].dim(), g[0].dim());
    for (const auto& x : g) {
        sum += x.g.value();
    }
    std::vector<WeightJet> out;
    for (std::size_t a = 0; a < g.size(); ++a) {
        out.push_back(set_base_hessian(f[a], base_ricci(g[a]) - sum));
    }
    return out;
}

double fano_defect(const WeightJet& f, const MetricJet& g)
{
    return fano_defect(f, g, g.g);
}

double fano_defect(const WeightJet& f, const MetricJet& g, const JetMatrix& target)
{
    return (base_ricci(g) - base_hessian(f) - target.value()).cwiseAbs().maxCoeff();
}

std::vector<JetConstraint> phi_constraints(const ConstraintSet& cs, const Connection& c)
{
    std::vector<JetConstraint> out;
    // Each residual map copies the connection so the constraints outlive the caller's data.
    if (cs.integrable >= 0) {
        out.push_back({"integrable",
                       [](const TensorJet& phi) { return dbar(phi) - 0.5 * bracket(phi, phi); }, 1, cs.integrable});
    }
    if (cs.omega_compatible >= 0) {
        out.push_back({"omega_compatible", [g = c.g](const TensorJet& phi) { return contract_omega(phi, g); }, 0,
                       cs.omega_compatible});
    }
    if (cs.gauge >= 0) {
        out.push_back({"gauge", [c](const TensorJet& phi) { return dbar_star_f(phi, c); }, 1, cs.gauge});
    }
    if (cs.divergence_free >= 0) {
        out.push_back(
            {"divergence_free", [c](const TensorJet& phi) { return div_f(phi, c); }, 1, cs.divergence_free});
    }
    return out;
}

VectorFormJet random_constrained_phi(std::uint64_t seed, int m, int order, const ConstraintSet& cs, const MetricJet& g,
                                     const WeightJet& f)
{
    if (g.dim() != m || f.f.dim() != m) {
        throw ShapeError("phi, metric and weight live in different dimensions");
    }
    if (cs.fano_relation >= 0) {
        const double d = fano_defect(f, g);
        if (d > 1e-12 * std::max(1.0, g.g.value().cwiseAbs().maxCoeff())) {
            throw InfeasibleError("weight does not satisfy the Fano relation at the base point", 0);
        }
    }
    auto rng = make_rng(seed, 2);
    VectorFormJet phi = make_vector_form(m, 1, order);
    for (std::size_t k = 0; k < phi.size(); ++k) {
        phi.flat(k) = random_disc_jet(m, order, rng);
    }
    const Connection c = connection(g, f);
    return project_constraints(phi, phi_constraints(cs, c), nullptr);
}

std::vector<double> constraint_residuals(const VectorFormJet& phi, const ConstraintSet& cs, const MetricJet& g,
                                         const WeightJet& f)
{
    const Connection c = connection(g, f);
    std::vector<double> out;
    for (const auto& x : phi_constraints(cs, c)) {
        out.push_back(constraint_residual(phi, x));
    }
    return out;
}

} // namespace fanolab
