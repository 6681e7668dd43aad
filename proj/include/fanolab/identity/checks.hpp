#pragma once

#include "fanolab/identity/chart.hpp"
#include "fanolab/identity/constraints.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fanolab {

/// Outcome of one two-sided evaluation of an identity.
struct IdentityReport {
    std::string name;
    int m = 0;
    int p = 0;
    int q = 0;
    std::uint64_t seed = 0;
    double abs_residual = 0;
    /// abs_residual / max(|lhs|, |rhs|, 1e-30)
    double rel_residual = 0;
    double tolerance = 0;
    bool pass = false;
    /// Relative residual of the same evaluation with one hypothesis dropped.
    std::optional<double> control_residual;
    std::string control_dropped;
    /// Relative residuals of intermediate identities, by name.
    std::vector<std::pair<std::string, double>> details;

    double detail(const std::string& key) const;
};

struct CheckOptions {
    /// Pass threshold on the relative residual; <= 0 keeps the identity's default.
    double tolerance = 0;
    /// Also run the control with a hypothesis dropped.
    bool control = true;
};

/// Laplacian of a random (p,q)-form from its definition against the curvature formula.
/// Weighted: the weight is the Ricci potential and the zeroth-order term is q eta.
IdentityReport check_bochner_kodaira(int m, int p, int q, std::uint64_t seed, bool weighted,
                                     const CheckOptions& opt = {});

/// dbar dbar*_f (phi _| omega) = i div_f(dbar phi) + phi _| omega for dbar*_f phi = 0.
IdentityReport check_lemma_k1(int m, std::uint64_t seed, const CheckOptions& opt = {});

/// Deformed metric by pairing against its closed form, with the intermediate frame identity.
IdentityReport check_prop6(int m, std::uint64_t seed, const CheckOptions& opt = {});

/// Ricci form of the deformed structure against omega + i ddbar(f + log det(1 - phi phibar)).
IdentityReport check_theorem_e(int m, std::uint64_t seed, const CheckOptions& opt = {});

/// J_t from the chart: J^2 = -1, closed form, first variation 2i psi - conj, omega-compatibility.
IdentityReport check_complex_structure(int m, std::uint64_t seed, const CheckOptions& opt = {});

/// First variation of the scalar curvature along t psi against dbar* div psi + conj.
IdentityReport check_scalar_linearization(int m, std::uint64_t seed, const CheckOptions& opt = {});

/// ddbar of the first variation of the Ricci potential against d div_f psi + conj.
IdentityReport check_ricci_volume_variation(int m, std::uint64_t seed, const CheckOptions& opt = {});

/// Bochner-Kodaira for k metrics coupled through Ric(g_a) = sum_b omega_b + i ddbar f_a.
IdentityReport check_coupled_bk(int k, int m, int q, std::uint64_t seed, const CheckOptions& opt = {});

/// Tangent vector psi to the deformation space: dbar psi = 0 and psi _| omega = 0 to the given orders.
VectorFormJet random_tangent_psi(std::uint64_t seed, int m, int order, const MetricJet& g, int closed_through,
                                 int compatible_through);

/// t psi as a jet with t_order 1.
VectorFormJet linear_path(const VectorFormJet& psi);

/// Random (p,q)-form with antisymmetric components.
FormJet random_form(std::uint64_t seed, int m, int p, int q, int order);

} // namespace fanolab
