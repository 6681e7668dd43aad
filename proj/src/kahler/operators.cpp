#include "fanolab/kahler/operators.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <numeric>

namespace fanolab {

namespace {

using cd = std::complex<double>;
const cd I{0.0, 1.0};

std::vector<Slot> prepend(Slot s, const std::vector<Slot>& rest)
{
    std::vector<Slot> r{s};
    r.insert(r.end(), rest.begin(), rest.end());
    return r;
}

// Index of the first antiholomorphic slot; every later slot must be down_bar too.
std::size_t barred_start(const TensorJet& t)
{
    const auto& s = t.slots();
    auto it = std::find(s.begin(), s.end(), Slot::down_bar);
    if (!std::all_of(it, s.end(), [](Slot x) { return x == Slot::down_bar; })) {
        throw ShapeError("antiholomorphic form slots must come last");
    }
    if (std::find(s.begin(), it, Slot::up_bar) != it) {
        throw ShapeError("up_bar slots are not supported by form operators");
    }
    return static_cast<std::size_t>(it - s.begin());
}

int factorial(int n)
{
    int r = 1;
    for (int k = 2; k <= n; ++k) {
        r *= k;
    }
    return r;
}

TensorJet alternate(const TensorJet& d, std::size_t start, int p)
{
    // d carries the derivative direction in slot 0 and the form in slots 1..;
    // out[lead, j0..jq] = (-1)^p sum_k (-1)^k d[jk, lead, j0..^jk..jq].
    const int m = d.dim();
    std::vector<Slot> slots(d.slots().begin() + 1, d.slots().end());
    slots.push_back(Slot::down_bar);
    TensorJet out(m, slots, d.order(), d.t_order());
    const std::size_t q1 = slots.size() - start;
    const double sign_p = p % 2 ? -1.0 : 1.0;
    for (std::size_t n = 0; n < out.size(); ++n) {
        const auto idx = out.unflatten(n);
        Jet s;
        for (std::size_t k = 0; k < q1; ++k) {
            std::vector<int> src;
            src.reserve(idx.size());
            src.push_back(idx[start + k]);
            for (std::size_t a = 0; a < idx.size(); ++a) {
                if (a != start + k) {
                    src.push_back(idx[a]);
                }
            }
            const double sg = sign_p * (k % 2 ? -1.0 : 1.0);
            accumulate(s, d.at(src) * cd(sg));
        }
        out.flat(n) = s;
    }
    return out.normalized();
}

Eigen::MatrixXcd base_metric(const MetricJet& g)
{
    return g.g.value();
}

} // namespace

TensorJet coordinate_derivative(const TensorJet& t, bool bar)
{
    const int m = t.dim();
    TensorJet out(m, prepend(bar ? Slot::down_bar : Slot::down, t.slots()), std::max(t.order() - 1, 0), t.t_order());
    for (int a = 0; a < m; ++a) {
        for (std::size_t n = 0; n < t.size(); ++n) {
            out.flat(static_cast<std::size_t>(a) * t.size() + n) = partial(t.flat(n), bar ? zbar(a) : z(a));
        }
    }
    return out;
}

TensorJet covariant_derivative(const TensorJet& t, const Connection& c, bool bar, bool weighted)
{
    const int m = t.dim();
    if (c.dim() != m) {
        throw ShapeError("connection and tensor live in different dimensions");
    }
    TensorJet out = coordinate_derivative(t, bar);
    const auto& slots = t.slots();
    for (int a = 0; a < m; ++a) {
        for (std::size_t n = 0; n < t.size(); ++n) {
            auto idx = t.unflatten(n);
            Jet& o = out.flat(static_cast<std::size_t>(a) * t.size() + n);
            for (std::size_t s = 0; s < slots.size(); ++s) {
                const Slot sl = slots[s];
                const bool acts = bar ? (sl == Slot::up_bar || sl == Slot::down_bar) : (sl == Slot::up || sl == Slot::down);
                if (!acts) {
                    continue;
                }
                const bool upper = sl == Slot::up || sl == Slot::up_bar;
                const int orig = idx[s];
                for (int l = 0; l < m; ++l) {
                    idx[s] = l;
                    const Jet& gam = bar ? (upper ? c.GammaBar(orig, a, l) : c.GammaBar(l, a, orig))
                                         : (upper ? c.Gamma(orig, a, l) : c.Gamma(l, a, orig));
                    const Jet term = tmul(gam, t.at(idx));
                    o = upper ? tadd(o, term) : tadd(o, -term);
                }
                idx[s] = orig;
            }
            if (weighted && !bar && c.weighted) {
                o = tadd(o, tmul(c.df[static_cast<std::size_t>(a)], t.flat(n)));
            }
        }
    }
    return out.normalized();
}

TensorJet dbar(const TensorJet& eta)
{
    const std::size_t start = barred_start(eta);
    return alternate(coordinate_derivative(eta, true), start, eta.count(Slot::down));
}

TensorJet dbar_covariant(const TensorJet& eta, const Connection& c)
{
    const std::size_t start = barred_start(eta);
    return alternate(covariant_derivative(eta, c, true), start, eta.count(Slot::down));
}

FormJet dbar_star_f(const FormJet& eta, const Connection& c)
{
    const std::size_t start = barred_start(eta);
    if (start == eta.slots().size()) {
        throw ShapeError("dbar* needs a form with at least one antiholomorphic slot");
    }
    const int m = eta.dim();
    const int p = eta.count(Slot::down);
    const TensorJet d = covariant_derivative(eta, c, false, true);
    std::vector<Slot> slots(eta.slots());
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(start));
    TensorJet out(m, slots, d.order(), d.t_order());
    const double sign = p % 2 ? 1.0 : -1.0;
    for (std::size_t n = 0; n < out.size(); ++n) {
        const auto idx = out.unflatten(n);
        Jet s;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                std::vector<int> src{i};
                src.insert(src.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(start));
                src.push_back(j);
                src.insert(src.end(), idx.begin() + static_cast<std::ptrdiff_t>(start), idx.end());
                accumulate(s, tmul(c.ginv(i, j), d.at(src)));
            }
        }
        out.flat(n) = s * cd(sign);
    }
    return out.normalized();
}

FormJet laplacian_f(const FormJet& eta, const Connection& c)
{
    const std::size_t start = barred_start(eta);
    FormJet r = dbar_star_f(dbar(eta), c);
    if (start < eta.slots().size()) {
        const FormJet other = dbar(dbar_star_f(eta, c));
        r = r.truncated(std::min(r.order(), other.order()), std::min(r.t_order(), other.t_order())) + other;
    }
    return r.normalized();
}

FormJet contract_omega(const VectorFormJet& phi, const MetricJet& g)
{
    if (!is_vector_form(phi) || phi.rank() != 2) {
        throw ShapeError("contract_omega needs a T'-valued (0,1)-form");
    }
    const int m = phi.dim();
    if (g.dim() != m) {
        throw ShapeError("metric and form live in different dimensions");
    }
    auto lowered = [&](int j, int k) {
        Jet s;
        for (int i = 0; i < m; ++i) {
            accumulate(s, tmul(g.g(i, j), phi.at({i, k})));
        }
        return s;
    };
    FormJet out(m, {Slot::down_bar, Slot::down_bar}, std::min(phi.order(), g.order()), phi.t_order());
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            out.at({j, k}) = tadd(lowered(j, k), -lowered(k, j)) * (-I);
        }
    }
    return out.normalized();
}

FormJet div_f(const VectorFormJet& phi, const Connection& c)
{
    if (!is_vector_form(phi)) {
        throw ShapeError("div_f needs a vector-valued form");
    }
    const int m = phi.dim();
    const TensorJet d = covariant_derivative(phi, c, false, true);
    std::vector<Slot> slots(phi.slots().begin() + 1, phi.slots().end());
    TensorJet out(m, slots, d.order(), d.t_order());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const auto idx = out.unflatten(n);
        Jet s;
        for (int i = 0; i < m; ++i) {
            std::vector<int> src{i, i};
            src.insert(src.end(), idx.begin(), idx.end());
            accumulate(s, d.at(src));
        }
        out.flat(n) = s;
    }
    return out;
}

TensorJet sharp(const FormJet& eta, const Connection& c)
{
    if (eta.count(Slot::down_bar) != eta.rank()) {
        throw ShapeError("sharp needs a (0,q)-form");
    }
    const int m = eta.dim();
    TensorJet cur = eta;
    for (int s = 0; s < eta.rank(); ++s) {
        std::vector<Slot> slots(cur.slots());
        slots[static_cast<std::size_t>(s)] = Slot::up;
        TensorJet next(m, slots, std::min(cur.order(), c.ginv.order()), cur.t_order());
        for (std::size_t n = 0; n < next.size(); ++n) {
            auto idx = next.unflatten(n);
            const int i = idx[static_cast<std::size_t>(s)];
            Jet acc;
            for (int j = 0; j < m; ++j) {
                idx[static_cast<std::size_t>(s)] = j;
                accumulate(acc, tmul(c.ginv(i, j), cur.at(idx)));
            }
            next.flat(n) = acc;
        }
        cur = next.normalized();
    }
    return cur;
}

VectorFormJet grad_field(const Jet& u, const Connection& c)
{
    return sharp(dbar(function_form(u)), c);
}

double base_norm(const TensorJet& t, const MetricJet& g)
{
    const int m = t.dim();
    const Eigen::MatrixXcd g0 = base_metric(g);
    // Hermitian forms: up slots pair with g_{i kbar}, down_bar slots with g^{i jbar}.
    const Eigen::MatrixXcd h_up = g0.transpose();
    const Eigen::MatrixXcd h_dn = g0.transpose().inverse();
    const Eigen::MatrixXcd l_up = Eigen::LLT<Eigen::MatrixXcd>(h_up).matrixL().adjoint();
    const Eigen::MatrixXcd l_dn = Eigen::LLT<Eigen::MatrixXcd>(h_dn).matrixL().adjoint();
    const std::size_t ncoef = t.flat(0).size();
    double total = 0;
    for (std::size_t k = 0; k < ncoef; ++k) {
        std::vector<cd> v(t.size());
        for (std::size_t n = 0; n < t.size(); ++n) {
            v[n] = t.flat(n).coefficients()[k];
        }
        std::size_t stride = t.size();
        for (int s = 0; s < t.rank(); ++s) {
            const Slot sl = t.slots()[static_cast<std::size_t>(s)];
            if (sl != Slot::up && sl != Slot::down_bar) {
                throw ShapeError("base_norm handles up and down_bar slots only");
            }
            const Eigen::MatrixXcd& l = sl == Slot::up ? l_up : l_dn;
            stride /= static_cast<std::size_t>(m);
            std::vector<cd> w(v.size(), cd(0));
            for (std::size_t n = 0; n < v.size(); ++n) {
                const int i = static_cast<int>((n / stride) % static_cast<std::size_t>(m));
                const std::size_t base = n - static_cast<std::size_t>(i) * stride;
                for (int j = 0; j < m; ++j) {
                    w[n] += l(i, j) * v[base + static_cast<std::size_t>(j) * stride];
                }
            }
            v.swap(w);
        }
        for (const auto& x : v) {
            total += std::norm(x);
        }
    }
    return std::sqrt(total);
}

double holomorphy_residual(const TensorJet& x, const MetricJet& g)
{
    if (x.count(Slot::up) != x.rank()) {
        throw ShapeError("holomorphy residual needs a tensor with up slots only");
    }
    if (x.order() < 1) {
        throw DegreeError("holomorphy residual needs order >= 1");
    }
    return base_norm(coordinate_derivative(x, true), g);
}

FormJet wedge(const FormJet& a, const FormJet& b)
{
    const int qa = a.rank();
    const int qb = b.rank();
    if (a.count(Slot::down_bar) != qa || b.count(Slot::down_bar) != qb || a.dim() != b.dim()) {
        throw ShapeError("wedge needs two (0,q)-forms in the same dimension");
    }
    const int m = a.dim();
    const int n = qa + qb;
    const int order = std::min(a.order(), b.order());
    const int t_order = std::min(a.t_order(), b.t_order());
    FormJet out = make_form(m, 0, n, order, t_order);
    if (n > m) {
        return out;
    }
    const double norm = 1.0 / (factorial(qa) * factorial(qb));
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto idx = out.unflatten(k);
        std::iota(perm.begin(), perm.end(), 0);
        Jet s;
        do {
            std::vector<int> ia, ib;
            for (int r = 0; r < qa; ++r) {
                ia.push_back(idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])]);
            }
            for (int r = qa; r < n; ++r) {
                ib.push_back(idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])]);
            }
            const int sg = permutation_sign(perm);
            accumulate(s, tmul(a.at(ia), b.at(ib)) * cd(sg * norm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.flat(k) = s.empty() ? Jet(m, order, t_order) : s;
    }
    return out.normalized();
}

FormJet component(const VectorFormJet& phi, int k)
{
    if (!is_vector_form(phi)) {
        throw ShapeError("component needs a vector-valued form");
    }
    const int m = phi.dim();
    FormJet out = make_form(m, 0, phi.rank() - 1, phi.order(), phi.t_order());
    for (std::size_t n = 0; n < out.size(); ++n) {
        std::vector<int> idx{k};
        const auto rest = out.unflatten(n);
        idx.insert(idx.end(), rest.begin(), rest.end());
        out.flat(n) = phi.at(idx);
    }
    return out;
}

VectorFormJet bracket(const VectorFormJet& phi, const VectorFormJet& psi)
{
    if (!is_vector_form(phi) || !is_vector_form(psi) || phi.dim() != psi.dim()) {
        throw ShapeError("bracket needs two vector-valued forms in the same dimension");
    }
    const int m = phi.dim();
    const int q1 = phi.rank() - 1;
    const int q2 = psi.rank() - 1;
    const TensorJet dpsi = coordinate_derivative(psi, false);
    const TensorJet dphi = coordinate_derivative(phi, false);
    const double sign = (q1 * q2) % 2 ? -1.0 : 1.0;
    // d_k chi^i as a (0,q)-form.
    auto dcomp = [m](const TensorJet& d, int k, int i) {
        const int q = d.rank() - 2;
        FormJet f = make_form(m, 0, q, d.order(), d.t_order());
        for (std::size_t n = 0; n < f.size(); ++n) {
            std::vector<int> idx{k, i};
            const auto rest = f.unflatten(n);
            idx.insert(idx.end(), rest.begin(), rest.end());
            f.flat(n) = d.at(idx);
        }
        return f;
    };
    std::vector<FormJet> parts(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        FormJet acc;
        for (int k = 0; k < m; ++k) {
            FormJet a = wedge(component(phi, k), dcomp(dpsi, k, i));
            FormJet b = wedge(component(psi, k), dcomp(dphi, k, i)) * cd(-sign);
            const int o = std::min(a.order(), b.order());
            const int to = std::min(a.t_order(), b.t_order());
            FormJet term = a.truncated(o, to) + b.truncated(o, to);
            if (acc.size() == 0) {
                acc = term;
            } else {
                const int oo = std::min(acc.order(), term.order());
                acc = acc.truncated(oo, to) + term.truncated(oo, to);
            }
        }
        parts[static_cast<std::size_t>(i)] = acc;
    }
    const int order = parts.front().order();
    VectorFormJet out = make_vector_form(m, q1 + q2, order, parts.front().t_order());
    for (int i = 0; i < m; ++i) {
        for (std::size_t n = 0; n < parts[static_cast<std::size_t>(i)].size(); ++n) {
            std::vector<int> idx{i};
            const auto rest = parts[static_cast<std::size_t>(i)].unflatten(n);
            idx.insert(idx.end(), rest.begin(), rest.end());
            out.at(idx) = parts[static_cast<std::size_t>(i)].flat(n);
        }
    }
    return out.normalized();
}

WeightJet ricci_potential_from_potentials(const WeightJet& f0, const Jet& psi, const MetricJet& g0,
                                          const MetricJet& gpsi)
{
    require_metric(gpsi.g);
    const Jet ratio = tmul(det(gpsi.g), inverse(det(g0.g)));
    Jet f = tadd(tadd(f0.f, -log(ratio)), -psi);
    f.set_real(reality_defect(f) <= 1e-12 * std::max(1.0, f.max_abs()));
    return {f};
}

} // namespace fanolab
