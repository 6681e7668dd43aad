#include "fanolab/spectral/global.hpp"

#include <cmath>

namespace fanolab::spectral {

namespace {

double rel(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    return std::abs(a - b) / scale;
}

std::complex<double> disc(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(u(rng));
    return std::polar(r, 2.0 * M_PI * u(rng));
}

} // namespace

double holomorphy_residual(const Discretization& d, const Eigen::VectorXcd& u)
{
    const Pairings pr{d};
    const Eigen::VectorXcd x = ops::grad(d, u);
    const double den = pr.vectors(x, x, false).real();
    const double scale = pr.functions(d.derivative(u, 0, 0), d.derivative(u, 0, 0), false).real();
    if (!(den > 1e-20 * std::max(1.0, scale))) {
        throw SingularError("(dbar u)^sharp vanishes: no vector field to test");
    }
    const Eigen::VectorXcd y = ops::dbar_grad(d, u);
    return std::sqrt(pr.beltrami(y, y, false).real() / den);
}

double eigenform_residual(const Discretization& d, const Eigen::VectorXcd& u, double lambda)
{
    const Pairings pr{d};
    const Eigen::VectorXcd eta = ops::dbar(d, u);
    const Eigen::VectorXcd r = ops::dbar_laplacian(d, u) - lambda * eta;
    const double den = pr.forms01(eta, eta).real();
    if (!(den > 0)) {
        throw SingularError("eigenform vanishes");
    }
    return std::sqrt(pr.forms01(r, r).real() / den);
}

FunctionSolver::FunctionSolver(const Discretization& d) : d_(d)
{
    const int k = d.basis().size();
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(d.basis().constant_coefficients());
    q_ = Eigen::MatrixXcd(qr.householderQ()).rightCols(k - 1);
    const Eigen::MatrixXcd a = assemble_laplacian_functions(d).A;
    ldlt_.compute(q_.adjoint() * a * q_);
    if (ldlt_.info() != Eigen::Success) {
        throw SingularError("function Laplacian is singular off the constants");
    }
}

Eigen::VectorXcd FunctionSolver::solve(const Eigen::VectorXcd& rhs) const
{
    Eigen::VectorXcd x = q_ * ldlt_.solve(q_.adjoint() * rhs);
    const Eigen::VectorXd& mu = d_.metric().weighted;
    const cd mean = (mu.cast<cd>().array() * d_.derivative(x, 0, 0).array()).sum() / mu.sum();
    x -= mean * d_.basis().constant_coefficients();
    return x;
}

namespace {

XiResult xi_with(const Discretization& d, const FunctionSolver& solver, const Tangent& psi)
{
    const Pairings pr{d};
    const Eigen::VectorXcd div = ops::div_dbar_grad(d, psi.potential);
    const Eigen::VectorXd w = d.metric().weighted.cwiseQuotient(d.metric().g);
    const Eigen::VectorXcd rhs = d.table(0, 1).adjoint() * (w.cast<cd>().asDiagonal() * div);
    XiResult r;
    r.coefficients = solver.solve(rhs);
    r.values = d.derivative(r.coefficients, 0, 0);
    const double nd = pr.forms01(div, div).real();
    const Eigen::VectorXcd e = ops::dbar(d, r.coefficients) - div;
    r.residual = nd > 0 ? std::sqrt(pr.forms01(e, e).real() / nd) : 0.0;
    r.mean = std::abs(pr.functions(r.values, Eigen::VectorXcd::Ones(r.values.size())));
    return r;
}

} // namespace

XiResult xi_psi(const Discretization& d, const Tangent& psi)
{
    return xi_with(d, FunctionSolver(d), psi);
}

XiResult xi_psi(const Discretization& d, const FunctionSolver& solver, const Tangent& psi)
{
    return xi_with(d, solver, psi);
}

FormG hermitian_form_G(const Discretization& d, const Tangent& psi)
{
    return hermitian_form_G(d, FunctionSolver(d), psi);
}

FormG hermitian_form_G(const Discretization& d, const FunctionSolver& solver, const Tangent& psi)
{
    const Pairings pr{d};
    const XiResult xi = xi_with(d, solver, psi);
    const Eigen::VectorXcd p = ops::dbar_grad(d, psi.potential);
    FormG g;
    g.psi_norm2 = pr.beltrami(p, p).real();
    g.value = g.psi_norm2 - pr.functions(xi.values, xi.values).real();
    g.xi_residual = xi.residual;
    return g;
}

MomentPairing moment_map_pairing(const Discretization& d, const Eigen::VectorXcd& v, const Eigen::VectorXcd& u)
{
    const Pairings pr{d};
    const Eigen::VectorXcd x = ops::dbar_star_div_dbar_grad(d, v);
    const Eigen::VectorXcd sdot = -2.0 * x.real().cast<cd>();
    const Eigen::VectorXcd uv = d.derivative(u, 0, 0).real().cast<cd>();
    MomentPairing m;
    m.lhs = pr.functions(sdot, uv, false).real();
    m.rhs = 2.0 * pr.beltrami(ops::dbar_grad(d, v), ops::dbar_grad(d, u), false).real();
    m.residual = (m.lhs == 0 && m.rhs == 0) ? 0.0 : rel(m.lhs, m.rhs);
    return m;
}

Eigen::VectorXcd random_real_function(const Discretization& d, std::mt19937_64& rng)
{
    const BasisSet& b = d.basis();
    Eigen::VectorXcd c(b.size());
    for (int k = 0; k < b.size(); ++k) {
        c(k) = disc(rng);
    }
    c = (c + b.conjugate_coefficients(c)) * 0.5;
    const Eigen::VectorXd& w = d.metric().omega;
    const double mean = (w.array() * d.derivative(c, 0, 0).real().array()).sum() / w.sum();
    c -= mean * b.constant_coefficients();
    return c;
}

Tangent random_tangent(const Discretization& d, std::mt19937_64& rng)
{
    Tangent t;
    t.potential.resize(d.basis().size());
    for (int k = 0; k < d.basis().size(); ++k) {
        t.potential(k) = disc(rng);
    }
    return t;
}

} // namespace fanolab::spectral
