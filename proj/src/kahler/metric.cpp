#include "fanolab/kahler/metric.hpp"

#include "fanolab/kahler/tensor.hpp"

#include <Eigen/Cholesky>

namespace fanolab {

void require_metric(const JetMatrix& g)
{
    if (g.rows() != g.cols() || g.rows() == 0) {
        throw ShapeError("metric must be a nonempty square jet matrix");
    }
    const Eigen::MatrixXcd c = g.value();
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NotAMetricError("constant term of the metric is not Hermitian");
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (c + c.adjoint()));
    if (llt.info() != Eigen::Success) {
        throw NotAMetricError("constant term of the metric is not positive definite");
    }
}

MetricJet metric_from_potential(const Jet& K)
{
    if (K.order() < 2) {
        throw DegreeError("potential needs order >= 2");
    }
    const int m = K.dim();
    JetMatrix g(m, m, m, K.order() - 2, K.t_order());
    for (int j = 0; j < m; ++j) {
        const Jet kj = partial(K, zbar(j));
        for (int i = 0; i < m; ++i) {
            g(i, j) = partial(kj, z(i));
        }
    }
    require_metric(g);
    return {g};
}

MetricJet metric_from_components(const JetMatrix& g)
{
    require_metric(g);
    return {g};
}

double hermitian_defect(const MetricJet& g)
{
    double r = 0;
    for (int i = 0; i < g.dim(); ++i) {
        for (int j = 0; j < g.dim(); ++j) {
            r = std::max(r, (g.g(i, j) - conj(g.g(j, i))).max_abs());
        }
    }
    return r;
}

JetMatrix inverse_metric(const MetricJet& g)
{
    return inverse(g.g).transpose();
}

CurvatureData curvature(const MetricJet& g)
{
    return curvature(g, inverse_metric(g));
}

CurvatureData curvature(const MetricJet& g, const JetMatrix& ginv)
{
    if (g.order() < 2) {
        throw DegreeError("curvature needs the metric to order >= 2");
    }
    const int m = g.dim();
    CurvatureData c;
    c.m = m;
    std::vector<Jet> dg(static_cast<std::size_t>(m * m * m));  // d_i g_{j pbar}
    std::vector<Jet> dbg(static_cast<std::size_t>(m * m * m)); // d_jbar g_{p lbar}
    auto at3 = [m](int a, int b, int d) { return static_cast<std::size_t>((a * m + b) * m + d); };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int p = 0; p < m; ++p) {
                dg[at3(i, j, p)] = partial(g.g(j, p), z(i));
                dbg[at3(i, j, p)] = partial(g.g(j, p), zbar(i));
            }
        }
    }
    c.gamma.resize(static_cast<std::size_t>(m * m * m));
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                Jet s;
                for (int p = 0; p < m; ++p) {
                    accumulate(s, tmul(ginv(k, p), dg[at3(i, j, p)]));
                }
                c.gamma[at3(k, i, j)] = s;
            }
        }
    }
    c.riemann.resize(static_cast<std::size_t>(m * m * m * m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                for (int l = 0; l < m; ++l) {
                    Jet s = partial(partial(g.g(k, l), zbar(j)), z(i));
                    for (int p = 0; p < m; ++p) {
                        for (int q = 0; q < m; ++q) {
                            s = tadd(s, -tmul(tmul(ginv(p, q), dg[at3(i, k, q)]), dbg[at3(j, p, l)]));
                        }
                    }
                    c.riemann[static_cast<std::size_t>(((i * m + j) * m + k) * m + l)] = s;
                }
            }
        }
    }
    const Jet& r0 = c.riemann.front();
    c.ricci = JetMatrix(m, m, m, r0.order(), r0.t_order());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Jet s;
            for (int k = 0; k < m; ++k) {
                for (int l = 0; l < m; ++l) {
                    accumulate(s, -tmul(ginv(k, l), c.R(i, j, k, l)));
                }
            }
            c.ricci(i, j) = s;
        }
    }
    Jet s;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            accumulate(s, tmul(ginv(i, j), c.ricci(i, j)));
        }
    }
    c.scalar = s;
    c.scalar.set_real(false);
    return c;
}

JetMatrix ricci_from_logdet(const MetricJet& g)
{
    const int m = g.dim();
    const Jet ld = logdet(g.g);
    JetMatrix r(m, m, m, ld.order() - 2, ld.t_order());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            r(i, j) = -partial(partial(ld, zbar(j)), z(i));
        }
    }
    return r;
}

namespace {

Connection make_connection(const MetricJet& g)
{
    Connection c;
    c.g = g;
    c.ginv = inverse_metric(g);
    c.curv = curvature(g, c.ginv);
    c.gamma_bar.reserve(c.curv.gamma.size());
    for (const auto& x : c.curv.gamma) {
        c.gamma_bar.push_back(conj(x));
    }
    return c;
}

} // namespace

Connection connection(const MetricJet& g)
{
    return make_connection(g);
}

Connection connection(const MetricJet& g, const WeightJet& f)
{
    Connection c = make_connection(g);
    if (f.f.dim() != g.dim()) {
        throw ShapeError("weight and metric live in different dimensions");
    }
    c.weighted = true;
    c.f = f.f;
    for (int i = 0; i < g.dim(); ++i) {
        c.df.push_back(partial(f.f, z(i)));
    }
    return c;
}

} // namespace fanolab
