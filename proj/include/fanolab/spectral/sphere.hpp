#pragma once

#include "fanolab/jets/jet.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace fanolab::spectral {

using cd = std::complex<double>;

/// c z^p zbar^q (1 + |z|^2)^-k
struct RationalTerm {
    cd c;
    int p = 0;
    int q = 0;
    int k = 0;
};

/// Finite sum of rational terms in the affine chart of CP^1. Closed under
/// chart derivatives, products and conjugation.
class SphereFunction {
public:
    SphereFunction() = default;
    explicit SphereFunction(std::vector<RationalTerm> terms);

    static SphereFunction term(cd c, int p, int q, int k);
    static SphereFunction constant(cd c) { return term(c, 0, 0, 0); }
    /// Height u = (|z|^2 - 1)/(|z|^2 + 1).
    static SphereFunction height();

    const std::vector<RationalTerm>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// d_z (bar = false) or d_zbar (bar = true).
    SphereFunction d(bool bar) const;
    /// d_z^i d_zbar^j
    SphereFunction derivative(int i, int j) const;
    SphereFunction conj() const;

    cd operator()(cd z) const;
    /// Values at many points, one pass over the terms.
    Eigen::VectorXcd evaluate(const std::vector<cd>& z) const;
    /// Taylor jet in zeta = z - z0, of the given order.
    Jet taylor(cd z0, int order) const;

    SphereFunction& operator+=(const SphereFunction& o);
    SphereFunction& operator*=(cd s);
    friend SphereFunction operator+(SphereFunction a, const SphereFunction& b) { return a += b; }
    friend SphereFunction operator-(SphereFunction a, const SphereFunction& b) { return a += b * cd(-1.0); }
    friend SphereFunction operator*(SphereFunction a, cd s) { return a *= s; }
    friend SphereFunction operator*(cd s, SphereFunction a) { return a *= s; }
    friend SphereFunction operator*(const SphereFunction& a, const SphereFunction& b);

private:
    void simplify();
    std::vector<RationalTerm> terms_;
};

/// Gauss-Legendre nodes in the height u times uniform angles. Weights are the
/// Fubini-Study area element du dtheta, which for omega in 2 pi c1 is omega itself.
struct QuadratureGrid {
    int n_radial = 0;
    int n_angular = 0;
    std::vector<double> u;
    std::vector<double> theta;
    std::vector<cd> z;
    std::vector<double> weight;
    /// Exactness for integrands polynomial in u and trigonometric in theta.
    int exactness = 0;

    std::size_t size() const noexcept { return z.size(); }
    double volume() const;
};

QuadratureGrid build_grid(int n_radial, int n_angular);

/// Grid sizes that integrate basis degree N (FS) or smooth perturbations of it to round-off.
QuadratureGrid default_grid(int basis_degree, bool perturbed);

enum class PerturbationMode { round, quadrupole, sectoral };

/// omega' = omega_FS + i ddbar (eps Y) with Y a real degree-2 spherical harmonic.
struct PerturbationSpec {
    double eps = 0;
    PerturbationMode mode = PerturbationMode::round;
};

/// "eps=0.1,mode=quad"; modes: quad, sect, round. Throws std::invalid_argument.
PerturbationSpec parse_perturbation(const std::string& text);
std::string to_string(const PerturbationSpec& spec);
std::string mode_name(PerturbationMode mode);

/// The harmonic Y for the mode (zero for round).
SphereFunction mode_function(PerturbationMode mode);

enum class VolumeNormalization {
    /// int e^f omega' = int omega'
    kahler_class,
    /// int e^f omega' = V0, the Fubini-Study volume
    reference
};

/// Metric, Ricci potential and measures at the grid nodes.
struct MetricOnGrid {
    PerturbationSpec spec;
    VolumeNormalization normalization = VolumeNormalization::kahler_class;
    /// eps Y
    SphereFunction potential;
    /// g_{1 1bar} = 2 (1+|z|^2)^-2 + d_z d_zbar (eps Y)
    SphereFunction g_function;
    Eigen::VectorXd g;
    /// Taylor jets at each node, order 4: log g and the Ricci potential f.
    std::vector<Jet> log_g;
    std::vector<Jet> f;
    /// Node weights of omega' and of e^f omega'.
    Eigen::VectorXd omega;
    Eigen::VectorXd weighted;
    /// max over nodes of |R - g - f_{z zbar}| with R from the curvature of the potential jet.
    double relation_residual = 0;
    /// Average scalar curvature.
    double sbar = 0;

    std::size_t size() const { return static_cast<std::size_t>(g.size()); }
    /// d_z^a d_zbar^b of log g or f at every node.
    Eigen::VectorXcd log_g_derivative(int a, int b) const;
    Eigen::VectorXcd f_derivative(int a, int b) const;
};

/// Throws NotAMetricError naming the node where g' <= 0.
MetricOnGrid perturb_metric(const QuadratureGrid& grid, const PerturbationSpec& spec,
                            VolumeNormalization normalization = VolumeNormalization::kahler_class);

} // namespace fanolab::spectral
