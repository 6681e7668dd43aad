#include "fanolab/kuranishi/solver.hpp"

#include "fanolab/jets/errors.hpp"

namespace fanolab::kuranishi {

const char* to_string(OrderStatus s)
{
    switch (s) {
    case OrderStatus::solved:
        return "solved";
    case OrderStatus::obstructed:
        return "obstructed";
    case OrderStatus::not_reached:
        return "not_reached";
    }
    return "?";
}

int KuranishiSolution::solved_order() const
{
    int k = 0;
    while (k < static_cast<int>(status.size()) && status[static_cast<std::size_t>(k)] == OrderStatus::solved) {
        ++k;
    }
    return k;
}

FormalSeries mc_residual(const Dgla& d, const FormalSeries& phi, std::optional<int> order)
{
    const FormalSeries p = phi.with_order(order.value_or(phi.order()));
    return apply_d(d, p) - Rational(1, 2) * bracket(d, p, p);
}

FormalSeries gauge_residual(const HodgeData& h, const FormalSeries& phi)
{
    if (!h.has(phi.degree())) {
        throw ShapeError("series degree is not in the DGLA");
    }
    const MatrixQ& dstar = h.at(phi.degree()).codifferential;
    return apply(dstar, phi.degree() - 1, phi);
}

std::vector<VectorQ> harmonic_degree_one(const HodgeData& h)
{
    std::vector<VectorQ> out;
    if (!h.has(1)) {
        return out;
    }
    const MatrixQ& b = h.at(1).harmonic_basis;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        out.emplace_back(b.col(j));
    }
    return out;
}

KuranishiSolution kuranishi_solve(const Dgla& d, const HodgeData& h, const std::vector<VectorQ>& linear, int order)
{
    if (order < 1) {
        throw ShapeError("Kuranishi order must be >= 1");
    }
    if (linear.empty()) {
        throw ShapeError("Kuranishi solve needs at least one linear coefficient");
    }
    if (!h.has(1)) {
        throw ShapeError("DGLA has no degree 1");
    }
    const MatrixQ& h1 = h.at(1).harmonic;
    for (std::size_t i = 0; i < linear.size(); ++i) {
        if (linear[i].size() != d.dim(1)) {
            throw ShapeError("linear coefficient " + std::to_string(i + 1) + " is not in degree 1");
        }
        if (!is_zero(VectorQ(h1 * linear[i] - linear[i]))) {
            throw GaugeError("linear coefficient of t_" + std::to_string(i + 1) + " is not harmonic");
        }
    }

    KuranishiSolution sol;
    sol.requested_order = order;
    sol.phi = FormalSeries::linear(1, linear, order);
    sol.status.assign(static_cast<std::size_t>(order), OrderStatus::not_reached);
    sol.status[0] = OrderStatus::solved;

    const bool has_two = h.has(2);
    for (int k = 2; k <= order; ++k) {
        const FormalSeries b = bracket(d, sol.phi, sol.phi).homogeneous(k);
        if (has_two) {
            const auto& h2 = h.at(2);
            for (const auto& [i, v] : b.coefficients()) {
                const VectorQ harm = h2.harmonic * v;
                if (!is_zero(harm)) {
                    sol.obstruction = Obstruction{k, i, harm};
                    break;
                }
            }
            if (sol.obstruction) {
                sol.status[static_cast<std::size_t>(k - 1)] = OrderStatus::obstructed;
                break;
            }
            const MatrixQ step = Rational(1, 2) * h2.codifferential * h2.green;
            for (const auto& [i, v] : b.coefficients()) {
                sol.phi.add(i, step * v);
            }
        }
        sol.status[static_cast<std::size_t>(k - 1)] = OrderStatus::solved;
    }
    sol.gauge_residual = gauge_residual(h, sol.phi);
    sol.mc_residual = mc_residual(d, sol.phi);
    return sol;
}

} // namespace fanolab::kuranishi
