#include "fanolab/identity/solver.hpp"

#include "fanolab/jets/errors.hpp"

#include <Eigen/QR>

#include <cmath>

namespace fanolab {

namespace {

struct Position {
    std::size_t comp;
    int mono;
    int tdeg;
};

// Degree-e coefficients of a residual tensor, split into real and imaginary parts.
void append_degree(const TensorJet& r, int e, const std::string& name, std::vector<double>& out)
{
    for (std::size_t k = 0; k < r.size(); ++k) {
        const Jet& c = r.flat(k);
        if (c.empty()) {
            continue;
        }
        if (c.order() < e) {
            throw DegreeError("constraint '" + name + "' residual known only to order " + std::to_string(c.order()));
        }
        const auto& lay = c.layout();
        const int lo = e == 0 ? 0 : lay.count(e - 1);
        const int hi = lay.count(e);
        for (int t = 0; t <= c.t_order(); ++t) {
            for (int i = lo; i < hi; ++i) {
                out.push_back(c.raw(i, t).real());
                out.push_back(c.raw(i, t).imag());
            }
        }
    }
}

std::vector<double> stacked(const TensorJet& x, const std::vector<JetConstraint>& cs, int d)
{
    std::vector<double> out;
    for (const auto& c : cs) {
        const int e = d - c.derivs;
        if (c.through < 0 || e < 0 || e > c.through) {
            continue;
        }
        append_degree(c.residual(x), e, c.name, out);
    }
    return out;
}

} // namespace

TensorJet project_constraints(TensorJet x, const std::vector<JetConstraint>& constraints, const UnknownMask& mask,
                              double tol)
{
    const int order = x.order();
    for (int d = 0; d <= order; ++d) {
        std::vector<Position> unknowns;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const Jet& c = x.flat(k);
            const auto& lay = c.layout();
            const int lo = d == 0 ? 0 : lay.count(d - 1);
            const int hi = lay.count(d);
            for (int t = 0; t <= c.t_order(); ++t) {
                for (int i = lo; i < hi; ++i) {
                    if (!mask || mask(k, i, t)) {
                        unknowns.push_back({k, i, t});
                    }
                }
            }
        }
        const std::vector<double> f0 = stacked(x, constraints, d);
        if (f0.empty()) {
            continue;
        }
        const Eigen::Index rows = static_cast<Eigen::Index>(f0.size());
        const Eigen::Map<const Eigen::VectorXd> r0(f0.data(), rows);
        if (unknowns.empty()) {
            if (r0.cwiseAbs().maxCoeff() > tol) {
                throw InfeasibleError("no free coefficients at degree " + std::to_string(d), d);
            }
            continue;
        }
        Eigen::MatrixXd jac(rows, 2 * static_cast<Eigen::Index>(unknowns.size()));
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            for (int part = 0; part < 2; ++part) {
                TensorJet probe = x;
                probe.flat(unknowns[u].comp).raw(unknowns[u].mono, unknowns[u].tdeg) +=
                    part == 0 ? Jet::scalar_type(1, 0) : Jet::scalar_type(0, 1);
                const std::vector<double> f1 = stacked(probe, constraints, d);
                const Eigen::Map<const Eigen::VectorXd> r1(f1.data(), rows);
                jac.col(static_cast<Eigen::Index>(2 * u + part)) = r1 - r0;
            }
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
        cod.setThreshold(1e-11);
        const Eigen::VectorXd step = cod.solve(r0);
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            const auto e = static_cast<Eigen::Index>(2 * u);
            x.flat(unknowns[u].comp).raw(unknowns[u].mono, unknowns[u].tdeg) -=
                Jet::scalar_type(step(e), step(e + 1));
        }
        const std::vector<double> f2 = stacked(x, constraints, d);
        double res = 0;
        for (double v : f2) {
            res = std::max(res, std::abs(v));
        }
        if (res > tol) {
            throw InfeasibleError("constraints cannot be met at degree " + std::to_string(d) + " (residual " +
                                      std::to_string(res) + ")",
                                  d);
        }
    }
    return x;
}

double constraint_residual(const TensorJet& x, const JetConstraint& c)
{
    const TensorJet r = c.residual(x);
    double res = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const Jet& j = r.flat(k);
        if (j.empty()) {
            continue;
        }
        const int hi = j.layout().count(std::min(c.through, j.order()));
        for (int t = 0; t <= j.t_order(); ++t) {
            for (int i = 0; i < hi; ++i) {
                res = std::max(res, static_cast<double>(std::abs(j.raw(i, t))));
            }
        }
    }
    return res;
}

} // namespace fanolab
