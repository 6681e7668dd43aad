#pragma once

#include "fanolab/jets/jet_matrix.hpp"
#include "fanolab/kahler/metric.hpp"
#include "fanolab/kahler/tensor.hpp"

#include <vector>

namespace fanolab {

/// Holomorphic coordinates w of the deformed structure, as jets in the background chart.
///
/// Index conventions: A(b, i) = d_i w^b, B = A^{-1} so B(i, b) = b^i_b,
/// Phi(i, j) = phi^i_jbar. The four blocks of the inverse real Jacobian are
/// stored as (i, a) matrices: dz_dw(i, a) = dz^i/dw^a and so on.
struct DeformedChart {
    VectorFormJet phi;
    /// w^b, one order above phi.
    std::vector<Jet> w;
    JetMatrix A;
    JetMatrix B;
    JetMatrix Phi;
    /// d(w, wbar)/d(z, zbar), rows w then wbar, columns z then zbar.
    JetMatrix jacobian;
    JetMatrix dz_dw;
    JetMatrix dzbar_dw;
    JetMatrix dz_dwbar;
    JetMatrix dzbar_dwbar;

    int dim() const { return A.rows(); }
    /// Order of the frame coefficients.
    int order() const { return A.order(); }
};

/// Solves d_jbar w^b = phi^i_jbar d_i w^b degree by degree with w = z + O(|z|^2) in the z directions.
///
/// w is built to order target_order (phi.order() + 1 when negative). Higher
/// corrections are the minimum-norm solutions. Throws ObstructionError
/// naming the first degree where the equation has no solution.
DeformedChart build_deformed_chart(const VectorFormJet& phi, int target_order = -1);

/// Largest coefficient of d_jbar w - phi d w through the stored order.
double chart_residual(const DeformedChart& c);

/// D_a u = du/dw^a (bar = false) or du/dwbar^a (bar = true), as a jet in z.
Jet chart_derivative(const DeformedChart& c, const Jet& u, int a, bool bar);

/// The (1,1) matrix D_a D_bbar u.
JetMatrix chart_hessian(const DeformedChart& c, const Jet& u);

/// g_t(a, b) = -i omega(d/dw^a, d/dwbar^b) computed by pairing the frame vectors.
JetMatrix deformed_metric(const DeformedChart& c, const MetricJet& g);

/// J_t as a 2m x 2m jet matrix on the basis (d/dz, d/dzbar), acting on components.
JetMatrix complex_structure_tensor(const DeformedChart& c);

/// The closed form of J_t in terms of phi alone.
JetMatrix complex_structure_from_phi(const VectorFormJet& phi);

/// Phi(i, j) = phi^i_jbar.
JetMatrix beltrami_matrix(const VectorFormJet& phi);

} // namespace fanolab
