#include "fanolab/identity/chart.hpp"

#include "fanolab/identity/solver.hpp"
#include "fanolab/jets/errors.hpp"

#include <algorithm>

namespace fanolab {

namespace {

using cd = Jet::scalar_type;

TensorJet beltrami_residual(const TensorJet& w, const VectorFormJet& phi)
{
    const int m = w.dim();
    TensorJet r(m, {Slot::up, Slot::down_bar}, 0, 0);
    for (int b = 0; b < m; ++b) {
        const Jet& wb = w.flat(static_cast<std::size_t>(b));
        std::vector<Jet> dw;
        for (int i = 0; i < m; ++i) {
            dw.push_back(partial(wb, z(i)));
        }
        for (int j = 0; j < m; ++j) {
            Jet s = partial(wb, zbar(j));
            for (int i = 0; i < m; ++i) {
                s = tadd(s, -tmul(phi.at({i, j}), dw[static_cast<std::size_t>(i)]));
            }
            r.at({b, j}) = s;
        }
    }
    return r;
}

// Background data independent of t, padded to the chart's t truncation.
Jet lift_t(const Jet& u, int t_order)
{
    return u.t_order() >= t_order ? u : u.padded(u.order(), t_order);
}

int frame_order(const DeformedChart& c)
{
    return c.A.order();
}

} // namespace

JetMatrix beltrami_matrix(const VectorFormJet& phi)
{
    if (!is_vector_form(phi) || phi.count(Slot::down_bar) != 1) {
        throw ShapeError("expected a vector-valued (0,1)-form");
    }
    const int m = phi.dim();
    const TensorJet p = phi.normalized();
    JetMatrix out(m, m, m, p.order(), p.t_order());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out(i, j) = p.at({i, j});
        }
    }
    return out;
}

DeformedChart build_deformed_chart(const VectorFormJet& phi_in, int target_order)
{
    const VectorFormJet phi = phi_in.normalized();
    beltrami_matrix(phi);
    const int m = phi.dim();
    const int n = target_order < 0 ? phi.order() + 1 : target_order;
    if (n < 1) {
        throw DegreeError("deformed chart needs w to order >= 1");
    }
    const int tord = phi.t_order();
    TensorJet w(m, {Slot::up}, n, tord);
    const auto& lay = w.flat(0).layout();
    std::vector<int> linear_hol;
    for (int i = 0; i < m; ++i) {
        std::vector<int> e(static_cast<std::size_t>(2 * m), 0);
        e[static_cast<std::size_t>(i)] = 1;
        linear_hol.push_back(lay.index(e));
        w.flat(static_cast<std::size_t>(i)).raw(linear_hol.back()) = 1;
    }
    const JetConstraint eq{"beltrami", [phi](const TensorJet& x) { return beltrami_residual(x, phi); }, 1,
                           std::min(n - 1, phi.order())};
    const UnknownMask mask = [&](std::size_t, int mono, int) {
        if (lay.degree(mono) == 0) {
            return false;
        }
        return std::find(linear_hol.begin(), linear_hol.end(), mono) == linear_hol.end();
    };
    try {
        w = project_constraints(w, {eq}, mask);
    } catch (const InfeasibleError& e) {
        throw ObstructionError("phi is not integrable: chart equation fails at degree " + std::to_string(e.order()),
                               e.order());
    }

    DeformedChart c;
    c.phi = phi;
    for (int b = 0; b < m; ++b) {
        c.w.push_back(w.flat(static_cast<std::size_t>(b)));
    }
    const int o = std::min(n - 1, phi.order());
    c.Phi = beltrami_matrix(phi).truncated(o, tord);
    c.A = JetMatrix(m, m, m, o, tord);
    c.jacobian = JetMatrix(2 * m, 2 * m, m, o, tord);
    for (int b = 0; b < m; ++b) {
        const Jet wb = c.w[static_cast<std::size_t>(b)];
        const Jet wbc = conj(wb);
        for (int i = 0; i < m; ++i) {
            c.A(b, i) = partial(wb, z(i)).truncated(o, tord);
            c.jacobian(b, i) = c.A(b, i);
            c.jacobian(b, m + i) = partial(wb, zbar(i)).truncated(o, tord);
            c.jacobian(m + b, i) = partial(wbc, z(i)).truncated(o, tord);
            c.jacobian(m + b, m + i) = partial(wbc, zbar(i)).truncated(o, tord);
        }
    }
    c.B = inverse(c.A);
    const JetMatrix p = inverse(c.jacobian);
    c.dz_dw = JetMatrix(m, m, m, o, tord);
    c.dzbar_dw = c.dz_dw;
    c.dz_dwbar = c.dz_dw;
    c.dzbar_dwbar = c.dz_dw;
    for (int i = 0; i < m; ++i) {
        for (int a = 0; a < m; ++a) {
            c.dz_dw(i, a) = p(i, a);
            c.dzbar_dw(i, a) = p(m + i, a);
            c.dz_dwbar(i, a) = p(i, m + a);
            c.dzbar_dwbar(i, a) = p(m + i, m + a);
        }
    }
    return c;
}

double chart_residual(const DeformedChart& c)
{
    const int m = c.dim();
    TensorJet w(m, {Slot::up}, 0, 0);
    for (int b = 0; b < m; ++b) {
        w.flat(static_cast<std::size_t>(b)) = c.w[static_cast<std::size_t>(b)];
    }
    return beltrami_residual(w, c.phi).max_abs();
}

Jet chart_derivative(const DeformedChart& c, const Jet& u_in, int a, bool bar)
{
    const int m = c.dim();
    const Jet u = lift_t(u_in, c.A.t_order());
    const JetMatrix& pz = bar ? c.dz_dwbar : c.dz_dw;
    const JetMatrix& pzb = bar ? c.dzbar_dwbar : c.dzbar_dw;
    Jet s;
    for (int i = 0; i < m; ++i) {
        accumulate(s, tmul(pz(i, a), partial(u, z(i))));
        accumulate(s, tmul(pzb(i, a), partial(u, zbar(i))));
    }
    return s;
}

JetMatrix chart_hessian(const DeformedChart& c, const Jet& u)
{
    const int m = c.dim();
    std::vector<Jet> db;
    for (int b = 0; b < m; ++b) {
        db.push_back(chart_derivative(c, u, b, true));
    }
    const int o = std::min(u.order() - 2, frame_order(c) - 1);
    const int t = c.A.t_order();
    JetMatrix h(m, m, m, o, t);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            h(a, b) = chart_derivative(c, db[static_cast<std::size_t>(b)], a, false).truncated(o, t);
        }
    }
    return h;
}

JetMatrix deformed_metric(const DeformedChart& c, const MetricJet& g)
{
    const int m = c.dim();
    JetMatrix out;
    bool first = true;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            Jet s;
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    const Jet pair = tadd(tmul(c.dz_dw(i, a), c.dzbar_dwbar(j, b)),
                                          -tmul(c.dz_dwbar(i, b), c.dzbar_dw(j, a)));
                    accumulate(s, tmul(lift_t(g.g(i, j), pair.t_order()), pair));
                }
            }
            if (first) {
                out = JetMatrix(m, m, m, s.order(), s.t_order());
                first = false;
            }
            out(a, b) = s;
        }
    }
    return out;
}

JetMatrix complex_structure_tensor(const DeformedChart& c)
{
    const int m = c.dim();
    JetMatrix s = c.jacobian;
    for (int r = 0; r < 2 * m; ++r) {
        const cd f = r < m ? cd(0, 1) : cd(0, -1);
        for (int k = 0; k < 2 * m; ++k) {
            s(r, k) *= f;
        }
    }
    return inverse(c.jacobian) * s;
}

JetMatrix complex_structure_from_phi(const VectorFormJet& phi)
{
    const JetMatrix p = beltrami_matrix(phi);
    const int m = p.rows();
    const JetMatrix pb = conj(p);
    const JetMatrix id = JetMatrix::identity(m, m, p.order(), p.t_order());
    const JetMatrix mm = inverse(id - p * pb);
    const JetMatrix mp = inverse(id - pb * p);
    const cd i1(0, 1);
    const JetMatrix tl = (mm + p * mp * pb) * i1;
    const JetMatrix tr = mm * p * cd(0, 2);
    const JetMatrix bl = mp * pb * cd(0, -2);
    const JetMatrix br = (mp + pb * mm * p) * cd(0, -1);
    JetMatrix j(2 * m, 2 * m, m, p.order(), p.t_order());
    for (int r = 0; r < m; ++r) {
        for (int k = 0; k < m; ++k) {
            j(r, k) = tl(r, k);
            j(r, m + k) = tr(r, k);
            j(m + r, k) = bl(r, k);
            j(m + r, m + k) = br(r, k);
        }
    }
    return j;
}

} // namespace fanolab
