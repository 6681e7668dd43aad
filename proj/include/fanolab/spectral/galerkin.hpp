#pragma once

#include "fanolab/spectral/sphere.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fanolab::spectral {

/// b_{ab} = z^a zbar^b / (1+|z|^2)^N, 0 <= a, b <= N, spanning the spherical
/// harmonics of degree <= N.
///
/// Coefficient vectors refer to the functions phi_j = sum_k transform(k, j) b_k.
/// With orthonormalize set, transform is block triangular per angular frequency
/// a - b and makes the phi_j orthonormal for the Fubini-Study metric; the raw
/// Gram matrix has condition number growing like 4^N.
struct BasisSet {
    int N = 0;
    std::vector<std::pair<int, int>> index;
    Eigen::MatrixXd transform;

    int size() const noexcept { return static_cast<int>(index.size()); }
    /// phi_k as a rational function.
    SphereFunction function(int k) const;
    /// Coefficients of the constant function 1.
    Eigen::VectorXcd constant_coefficients() const;
    /// Coefficients of conj(u) given those of u.
    Eigen::VectorXcd conjugate_coefficients(const Eigen::VectorXcd& c) const;
    /// The combination sum_k c_k b_k as a rational function.
    SphereFunction combination(const Eigen::VectorXcd& c) const;
};

BasisSet make_basis(int N, bool orthonormalize = true);

/// Grid, basis and metric together, with memoized derivative tables of the basis.
class Discretization {
public:
    Discretization(QuadratureGrid grid, BasisSet basis, MetricOnGrid metric);

    const QuadratureGrid& grid() const noexcept { return grid_; }
    const BasisSet& basis() const noexcept { return basis_; }
    const MetricOnGrid& metric() const noexcept { return metric_; }
    std::size_t nodes() const noexcept { return grid_.size(); }

    /// nodes x K table of d_z^i d_zbar^j b_k.
    const Eigen::MatrixXcd& table(int i, int j) const;
    /// d_z^i d_zbar^j of sum_k c_k b_k at the nodes.
    Eigen::VectorXcd derivative(const Eigen::VectorXcd& c, int i, int j) const;

    /// Node values of a few metric quantities, computed once.
    const Eigen::VectorXcd& log_g(int a, int b) const;
    const Eigen::VectorXcd& f(int a, int b) const;

private:
    QuadratureGrid grid_;
    BasisSet basis_;
    MetricOnGrid metric_;
    mutable std::map<std::pair<int, int>, Eigen::MatrixXcd> tables_;
    mutable std::map<std::pair<int, int>, Eigen::VectorXcd> log_g_;
    mutable std::map<std::pair<int, int>, Eigen::VectorXcd> f_;
};

/// Weighted Hermitian pairings on the grid. Forms and vector fields are node
/// arrays of their single chart component.
struct Pairings {
    const Discretization& d;
    /// int u vbar e^f omega
    cd functions(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, bool weighted = true) const;
    /// int g^{1 1bar} a bbar e^f omega for (0,1)-forms a dzbar, b dzbar
    cd forms01(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, bool weighted = true) const;
    /// int g X Ybar omega for (1,0) vector fields
    cd vectors(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, bool weighted = true) const;
    /// int psi taubar omega for T'-valued (0,1)-forms (trace pairing)
    cd beltrami(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& tau, bool weighted = true) const;
};

/// Pointwise operators on combinations of basis functions, at the nodes.
namespace ops {
/// (dbar u)_zbar
Eigen::VectorXcd dbar(const Discretization& d, const Eigen::VectorXcd& c);
/// Delta_f u = -g^{-1}(u_{z zbar} + f_z u_zbar); weighted = false drops f.
Eigen::VectorXcd laplacian(const Discretization& d, const Eigen::VectorXcd& c, bool weighted = true);
/// d_zbar of Delta_f u
Eigen::VectorXcd dbar_laplacian(const Discretization& d, const Eigen::VectorXcd& c);
/// (grad' u)^z = g^{-1} u_zbar
Eigen::VectorXcd grad(const Discretization& d, const Eigen::VectorXcd& c);
/// psi = dbar grad' v, the component psi^z_zbar
Eigen::VectorXcd dbar_grad(const Discretization& d, const Eigen::VectorXcd& c);
/// (div_f dbar grad' v)_zbar
Eigen::VectorXcd div_dbar_grad(const Discretization& d, const Eigen::VectorXcd& c, bool weighted = true);
/// dbar* div dbar grad' v with the unweighted adjoint and divergence
Eigen::VectorXcd dbar_star_div_dbar_grad(const Discretization& d, const Eigen::VectorXcd& c);
} // namespace ops

/// Generalized Hermitian eigenproblem A x = lambda B x for Galerkin coefficients.
struct Pencil {
    std::string kind;
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    /// Columns: trial functions in basis coefficients. For (0,1)-forms the trial
    /// form is dbar of the column function.
    Eigen::MatrixXcd trial;
    /// Average scalar curvature of the metric, carried into the result.
    double sbar = 0;
};

/// A_{kl} = <dbar b_l, dbar b_k>_f, B_{kl} = <b_l, b_k>_f. Throws ConditioningError when cond(B) > 1e12.
Pencil assemble_laplacian_functions(const Discretization& d);

/// Trial forms dbar u, u in the complement of the constants:
/// A = ||dbar eta||^2 + ||dbar*_f eta||^2, B = ||eta||^2.
Pencil assemble_laplacian_01forms(const Discretization& d);

struct SpectrumResult {
    std::string kind;
    std::vector<double> eigenvalues;
    /// Cluster id per eigenvalue, and multiplicity per cluster.
    std::vector<int> cluster;
    std::vector<int> multiplicity;
    /// ||A v - lambda B v|| / ||B v||
    std::vector<double> residuals;
    /// Eigenvectors as basis coefficients of the function (or form potential).
    Eigen::MatrixXcd vectors;
    double condition = 0;
    double cluster_tolerance = 0;
    double sbar = 0;

    /// Indices of the eigenvalues in the cluster containing the eigenvalue closest to `target`.
    std::vector<int> cluster_near(double target) const;
    /// Smallest eigenvalue above `floor`.
    double first_above(double floor) const;
};

constexpr double kConditionLimit = 1e12;
constexpr double kClusterTolerance = 1e-5;

SpectrumResult solve_pencil(const Pencil& p, double cluster_tolerance = kClusterTolerance);

/// Groups consecutive sorted values whose gap is <= tol * max(1, |lambda|).
std::vector<int> cluster_ids(const std::vector<double>& sorted, double tol);

} // namespace fanolab::spectral
