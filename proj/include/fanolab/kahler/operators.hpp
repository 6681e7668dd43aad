#pragma once

#include "fanolab/kahler/metric.hpp"
#include "fanolab/kahler/tensor.hpp"

namespace fanolab {

/// nabla_a T for every direction a (holomorphic or, with bar = true, antiholomorphic).
///
/// The direction becomes a new leading down (resp. down_bar) slot. With
/// weighted = true the holomorphic derivative is the Chern connection of
/// h = e^f on the trivial bundle, nabla_i + f_i.
TensorJet covariant_derivative(const TensorJet& t, const Connection& c, bool bar, bool weighted = false);

/// Plain coordinate derivative in every direction, as a new leading slot.
TensorJet coordinate_derivative(const TensorJet& t, bool bar);

/// dbar of a form or vector-valued form, coordinate alternating sum.
TensorJet dbar(const TensorJet& eta);
/// The same operator written with the metric connection.
TensorJet dbar_covariant(const TensorJet& eta, const Connection& c);

/// (dbar*_f eta)_{I J} = -(-1)^p g^{i jbar} (nabla_i + f_i) eta_{I jbar J}. Uses f only for a weighted connection.
FormJet dbar_star_f(const FormJet& eta, const Connection& c);

/// dbar* dbar + dbar dbar*; on functions -g^{i jbar}(d_i + f_i) d_jbar.
FormJet laplacian_f(const FormJet& eta, const Connection& c);

/// -sqrt(-1) psi with psi_{jbar kbar} = phi_{jbar kbar} - phi_{kbar jbar}, phi_{jbar kbar} = g_{i jbar} phi^i_{kbar}.
FormJet contract_omega(const VectorFormJet& phi, const MetricJet& g);

/// (div_f phi)_{J} = (nabla_i + f_i) phi^i_{J}. A vector field gives a function.
FormJet div_f(const VectorFormJet& phi, const Connection& c);

/// Raises every antiholomorphic slot of a (0,q)-form with g^{i jbar}.
TensorJet sharp(const FormJet& eta, const Connection& c);
/// (dbar u)^sharp = g^{i jbar} d_jbar u d_i.
VectorFormJet grad_field(const Jet& u, const Connection& c);

/// Norm, measured with g(0), of all stored coefficients of nabla'' X for a
/// tensor with up slots only.
double holomorphy_residual(const TensorJet& x, const MetricJet& g);

/// Norm with g(0) of every stored coefficient of a tensor whose slots are up or down_bar.
double base_norm(const TensorJet& t, const MetricJet& g);

/// Wedge of (0,q1)- and (0,q2)-forms in full components.
FormJet wedge(const FormJet& a, const FormJet& b);

/// The (0,q)-form phi^k of a vector-valued form.
FormJet component(const VectorFormJet& phi, int k);

/// [phi, psi]^i = phi^k ^ d_k psi^i - (-1)^{q1 q2} psi^k ^ d_k phi^i.
/// With this normalization dbar phi = (1/2)[phi, phi] is integrability.
VectorFormJet bracket(const VectorFormJet& phi, const VectorFormJet& psi);

/// f' = f0 - log(det g'/det g0) - psi, the Ricci potential of omega' = omega + i ddbar psi.
WeightJet ricci_potential_from_potentials(const WeightJet& f0, const Jet& psi, const MetricJet& g0,
                                          const MetricJet& gpsi);

} // namespace fanolab
