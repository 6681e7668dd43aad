#pragma once

#include "fanolab/spectral/galerkin.hpp"

#include <cstdint>
#include <random>

namespace fanolab::spectral {

/// ||nabla'' (dbar u)^sharp|| / ||(dbar u)^sharp|| on the grid.
/// Throws SingularError when the field vanishes.
double holomorphy_residual(const Discretization& d, const Eigen::VectorXcd& u);

/// For eta = dbar u: ||dbar(dbar*_f eta) - lambda eta|| / ||eta||, lambda = 1 by default.
double eigenform_residual(const Discretization& d, const Eigen::VectorXcd& u, double lambda = 1.0);

/// Cached factorization of the function Laplacian on the complement of constants.
class FunctionSolver {
public:
    explicit FunctionSolver(const Discretization& d);
    /// Solves <dbar x, dbar b_k> = rhs_k for x with int x Omega0 = 0.
    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

private:
    const Discretization& d_;
    Eigen::MatrixXcd q_;
    Eigen::LDLT<Eigen::MatrixXcd> ldlt_;
};

/// A tangent vector psi = dbar grad' v to the structures compatible with omega.
/// On CP^1 every T'-valued (0,1)-form has this shape, with v complex.
struct Tangent {
    Eigen::VectorXcd potential;
};

struct XiResult {
    /// Basis coefficients and node values of xi.
    Eigen::VectorXcd coefficients;
    Eigen::VectorXcd values;
    /// ||dbar xi - div_f psi|| / ||div_f psi||, 0 when psi = 0
    double residual = 0;
    /// int xi Omega0 after normalization
    double mean = 0;
};

/// Galerkin solution of dbar xi = div_f psi with int xi e^f omega = 0.
XiResult xi_psi(const Discretization& d, const Tangent& psi);
XiResult xi_psi(const Discretization& d, const FunctionSolver& solver, const Tangent& psi);

struct FormG {
    double value = 0;
    /// int |psi|^2 Omega0
    double psi_norm2 = 0;
    double xi_residual = 0;
};

/// int (|psi|^2 - |xi_psi|^2) Omega0
FormG hermitian_form_G(const Discretization& d, const Tangent& psi);
FormG hermitian_form_G(const Discretization& d, const FunctionSolver& solver, const Tangent& psi);

struct MomentPairing {
    double lhs = 0;
    double rhs = 0;
    double residual = 0;
};

/// lhs = int (d/dt s) u omega with d/dt s = -(dbar* div psi + conj), psi = dbar grad' v;
/// rhs = 2 Re int tr(psi . conj(dbar grad' u)) omega. u, v real, given by basis coefficients.
MomentPairing moment_map_pairing(const Discretization& d, const Eigen::VectorXcd& v, const Eigen::VectorXcd& u);

/// Random real mean-zero function in the basis span, coefficients from the unit disc.
Eigen::VectorXcd random_real_function(const Discretization& d, std::mt19937_64& rng);
/// Random complex potential for a tangent vector.
Tangent random_tangent(const Discretization& d, std::mt19937_64& rng);

} // namespace fanolab::spectral
