#pragma once

#include "fanolab/jets/jet_matrix.hpp"

#include <vector>

namespace fanolab {

/// Kaehler metric g_{i jbar} as a matrix of jets, g(i, j) = g_{i jbar}.
struct MetricJet {
    JetMatrix g;

    int dim() const { return g.rows(); }
    int order() const { return g.order(); }
    int t_order() const { return g.t_order(); }
};

/// Real weight f; line-bundle metric h = e^f on the trivial bundle.
struct WeightJet {
    Jet f;
};

/// g_{i jbar} = d_i d_jbar K. Throws NotAMetricError unless g(0) is positive definite.
MetricJet metric_from_potential(const Jet& K);
/// Wraps explicit components after the same positivity check.
MetricJet metric_from_components(const JetMatrix& g);
/// Throws NotAMetricError unless the constant term of g is Hermitian positive definite.
void require_metric(const JetMatrix& g);

/// max |g_{i jbar} - conj(g_{j ibar})| over all coefficients.
double hermitian_defect(const MetricJet& g);

/// ginv(i, j) = g^{i jbar}, so that g^{i jbar} g_{k jbar} = delta^i_k.
JetMatrix inverse_metric(const MetricJet& g);

/// Christoffel symbols, curvature, Ricci and scalar curvature at a point.
///
/// Gamma^k_{ij} = g^{k pbar} d_i g_{j pbar},
/// R_{i jbar k lbar} = d_i d_jbar g_{k lbar} - g^{p qbar} d_i g_{k qbar} d_jbar g_{p lbar},
/// R_{i jbar} = -g^{k lbar} R_{i jbar k lbar}, s = g^{i jbar} R_{i jbar}.
struct CurvatureData {
    int m = 0;
    std::vector<Jet> gamma;
    std::vector<Jet> riemann;
    JetMatrix ricci;
    Jet scalar;

    const Jet& Gamma(int k, int i, int j) const { return gamma[static_cast<std::size_t>((k * m + i) * m + j)]; }
    const Jet& R(int i, int j, int k, int l) const
    {
        return riemann[static_cast<std::size_t>(((i * m + j) * m + k) * m + l)];
    }
};

CurvatureData curvature(const MetricJet& g);
CurvatureData curvature(const MetricJet& g, const JetMatrix& ginv);

/// -d_i d_jbar log det g.
JetMatrix ricci_from_logdet(const MetricJet& g);

/// Everything the covariant operators need, computed once per metric and weight.
struct Connection {
    MetricJet g;
    JetMatrix ginv;
    CurvatureData curv;
    /// Gamma-bar^{lbar}_{ibar kbar} = conj(Gamma^l_{ik}) as functions, same layout as curv.gamma.
    std::vector<Jet> gamma_bar;
    bool weighted = false;
    Jet f;
    /// df[i] = d_i f.
    std::vector<Jet> df;

    int dim() const { return g.dim(); }
    const Jet& Gamma(int k, int i, int j) const { return curv.Gamma(k, i, j); }
    const Jet& GammaBar(int k, int i, int j) const
    {
        const int m = dim();
        return gamma_bar[static_cast<std::size_t>((k * m + i) * m + j)];
    }
};

Connection connection(const MetricJet& g);
Connection connection(const MetricJet& g, const WeightJet& f);

} // namespace fanolab
