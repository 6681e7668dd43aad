#pragma once

#include "fanolab/kuranishi/series.hpp"

#include <optional>
#include <vector>

namespace fanolab::kuranishi {

enum class OrderStatus { solved, obstructed, not_reached };

const char* to_string(OrderStatus s);

/// First order k at which H[phi, phi]_k != 0.
struct Obstruction {
    int order = 0;
    /// First multi-index (lexicographic) with a nonzero harmonic part.
    MultiIndex index;
    /// H[phi, phi] at that multi-index, in degree 2.
    VectorQ component;
};

struct KuranishiSolution {
    int requested_order = 0;
    /// Degree-1 series; coefficients through the last solved order.
    FormalSeries phi{0, 0, 1, 0};
    /// status[k - 1] for orders 1..requested_order.
    std::vector<OrderStatus> status;
    std::optional<Obstruction> obstruction;
    /// d^* phi, degree 0.
    FormalSeries gauge_residual{0, 0, 0, 0};
    /// d phi - 1/2 [phi, phi], degree 2.
    FormalSeries mc_residual{0, 0, 2, 0};

    bool obstructed() const noexcept { return obstruction.has_value(); }
    int solved_order() const;
};

/// Solves phi = sum_I t^I phi_I + 1/2 d^* G [phi, phi] order by order through `order`.
///
/// linear[i] is the coefficient of t_i and must be harmonic of degree 1 (GaugeError
/// otherwise). At each order k >= 2 the harmonic part of [phi, phi]_k is checked first;
/// if nonzero the order is marked obstructed and solving halts.
KuranishiSolution kuranishi_solve(const Dgla& d, const HodgeData& h, const std::vector<VectorQ>& linear, int order);

/// d phi - 1/2 [phi, phi] through `order` (phi is read as a polynomial; default its own order).
FormalSeries mc_residual(const Dgla& d, const FormalSeries& phi, std::optional<int> order = {});

/// d^* phi
FormalSeries gauge_residual(const HodgeData& h, const FormalSeries& phi);

/// Columns of the harmonic basis of degree 1 as separate vectors.
std::vector<VectorQ> harmonic_degree_one(const HodgeData& h);

} // namespace fanolab::kuranishi
