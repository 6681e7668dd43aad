#include "fanolab/identity/checks.hpp"

#include "fanolab/jets/errors.hpp"
#include "fanolab/kahler/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fanolab {

namespace {

using cd = Jet::scalar_type;
constexpr cd I1(0, 1);

struct Sides {
    std::vector<cd> lhs;
    std::vector<cd> rhs;
};

double max_abs(const std::vector<cd>& v)
{
    double r = 0;
    for (const auto& x : v) {
        r = std::max(r, std::abs(x));
    }
    return r;
}

double abs_diff(const Sides& s)
{
    if (s.lhs.size() != s.rhs.size()) {
        throw ShapeError("identity sides have different sizes");
    }
    double r = 0;
    for (std::size_t k = 0; k < s.lhs.size(); ++k) {
        r = std::max(r, std::abs(s.lhs[k] - s.rhs[k]));
    }
    return r;
}

double rel_diff(const Sides& s)
{
    return abs_diff(s) / std::max({max_abs(s.lhs), max_abs(s.rhs), 1e-30});
}

void append(Sides& s, const Sides& o)
{
    s.lhs.insert(s.lhs.end(), o.lhs.begin(), o.lhs.end());
    s.rhs.insert(s.rhs.end(), o.rhs.begin(), o.rhs.end());
}

std::vector<cd> base_values(const TensorJet& t)
{
    std::vector<cd> v;
    for (std::size_t k = 0; k < t.size(); ++k) {
        v.push_back(t.flat(k).value());
    }
    return v;
}

std::vector<cd> base_values(const JetMatrix& a)
{
    std::vector<cd> v;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            v.push_back(a(i, j).value());
        }
    }
    return v;
}

/// Every stored coefficient of a and b, truncated to the common order.
Sides full_sides(const JetMatrix& a, const JetMatrix& b)
{
    const int o = std::min(a.order(), b.order());
    const int t = std::min(a.t_order(), b.t_order());
    Sides s;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const Jet ja = a(i, j).truncated(o, t);
            const Jet jb = b(i, j).truncated(o, t);
            s.lhs.insert(s.lhs.end(), ja.coefficients().begin(), ja.coefficients().end());
            s.rhs.insert(s.rhs.end(), jb.coefficients().begin(), jb.coefficients().end());
        }
    }
    return s;
}

/// t^1 coefficients at the base point.
std::vector<cd> base_velocity(const JetMatrix& a)
{
    std::vector<cd> v;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            v.push_back(a(i, j).t_order() >= 1 ? a(i, j).raw(0, 1) : cd(0));
        }
    }
    return v;
}

void finish(IdentityReport& r, const Sides& s, double default_tol, const CheckOptions& opt)
{
    r.abs_residual = abs_diff(s);
    r.rel_residual = rel_diff(s);
    r.tolerance = opt.tolerance > 0 ? opt.tolerance : default_tol;
    r.pass = r.rel_residual <= r.tolerance;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k)
{
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Jet lift(const Jet& u, int t_order)
{
    return u.t_order() >= t_order ? u : u.padded(u.order(), t_order);
}

TensorJet random_tensor_field(std::uint64_t seed, int m, int order)
{
    auto rng = make_rng(seed, 5);
    TensorJet x(m, {Slot::up}, order);
    for (std::size_t k = 0; k < x.size(); ++k) {
        Jet j(m, order);
        for (int n = 0; n < j.block(); ++n) {
            j.raw(n) = disc_sample(rng);
        }
        j.set_real(false);
        x.flat(k) = j;
    }
    return x;
}

MetricJet truncated_metric(const MetricJet& g, int order)
{
    return {g.g.truncated(order, g.t_order())};
}

// --- Bochner-Kodaira -------------------------------------------------------

/// T eta with slot `pos` replaced by `v`.
std::vector<int> replaced(std::vector<int> idx, std::size_t pos, int v)
{
    idx[pos] = v;
    return idx;
}

Sides bk_sides(const FormJet& eta, const Connection& c, int p, int q, bool weighted)
{
    const int m = eta.dim();
    const FormJet lhs = laplacian_f(eta, c);
    const TensorJet dd = covariant_derivative(covariant_derivative(eta, c, true), c, false, weighted);
    const Eigen::MatrixXcd gi = c.ginv.value();
    const Eigen::MatrixXcd ric = c.curv.ricci.value();
    auto R = [&](int i, int j, int k, int l) { return c.curv.R(i, j, k, l).value(); };
    auto eval = [&](const std::vector<int>& idx) { return eta.at(idx).value(); };

    Sides s;
    s.lhs = base_values(lhs);
    for (std::size_t n = 0; n < eta.size(); ++n) {
        const std::vector<int> idx = eta.unflatten(n);
        cd rough = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                std::vector<int> full{i, j};
                full.insert(full.end(), idx.begin(), idx.end());
                rough -= gi(i, j) * dd.at(full).value();
            }
        }
        cd curv = 0;
        for (int a = 0; a < p; ++a) {
            for (int b = 0; b < q; ++b) {
                const auto pa = static_cast<std::size_t>(a);
                const auto pb = static_cast<std::size_t>(p + b);
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        for (int l = 0; l < m; ++l) {
                            for (int r = 0; r < m; ++r) {
                                curv += gi(i, j) * gi(l, r) * R(i, idx[pb], idx[pa], r) *
                                        eval(replaced(replaced(idx, pa, l), pb, j));
                            }
                        }
                    }
                }
            }
        }
        cd zeroth = 0;
        if (weighted) {
            zeroth = static_cast<double>(q) * eval(idx);
        } else {
            for (int b = 0; b < q; ++b) {
                const auto pb = static_cast<std::size_t>(p + b);
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        zeroth += gi(i, j) * ric(i, idx[pb]) * eval(replaced(idx, pb, j));
                    }
                }
            }
        }
        s.rhs.push_back(rough + curv + zeroth);
    }
    return s;
}

// --- Ricci form helpers --------------------------------------------------------

Jet t_derivative(const Jet& u, const VectorFormJet& phi, int i)
{
    // T_i = d_i - conj(phi^k_ibar) d_kbar
    const int m = phi.dim();
    Jet s = partial(u, z(i));
    for (int k = 0; k < m; ++k) {
        s = tadd(s, -tmul(conj(phi.at({k, i})), partial(u, zbar(k))));
    }
    return s;
}

struct RicciFormSides {
    Sides main;
    std::vector<std::pair<std::string, Sides>> parts;
};

RicciFormSides theorem_e_sides(const Background& bg, const VectorFormJet& phi)
{
    const int m = bg.g.dim();
    const DeformedChart c = build_deformed_chart(phi);
    const JetMatrix gt = deformed_metric(c, bg.g);
    const JetMatrix& pm = c.Phi;
    const JetMatrix id = JetMatrix::identity(m, m, pm.order(), pm.t_order());
    const Jet ld_belt = logdet(id - pm * conj(pm));
    const Jet& f = bg.f.f;

    RicciFormSides out;
    out.main.lhs = base_values(chart_hessian(c, logdet(gt)) * cd(-1));
    const JetMatrix rhs_h = chart_hessian(c, tadd(f, ld_belt));
    std::vector<cd> rhs = base_values(gt);
    const std::vector<cd> h = base_values(rhs_h);
    for (std::size_t k = 0; k < rhs.size(); ++k) {
        rhs[k] += h[k];
    }
    out.main.rhs = rhs;

    // det g_t det(1 - phi phibar) |det A|^2 = det g0, compared without logarithms
    {
        const Jet lhs = det(gt) * det(id - pm * conj(pm)) * det(c.A) * det(conj(c.A));
        const Jet rhs = det(bg.g.g).truncated(lhs.order());
        Sides s;
        s.lhs.assign(lhs.coefficients().begin(), lhs.coefficients().end());
        s.rhs.assign(rhs.coefficients().begin(), rhs.coefficients().end());
        out.parts.emplace_back("h5", s);
    }
    {
        Jet u = tadd(logdet(c.A), logdet(conj(c.A)));
        u = tadd(u, -f);
        u = tadd(u, -logdet(bg.g.g));
        Sides s{base_values(chart_hessian(c, u)), base_values(gt)};
        out.parts.emplace_back("p9", s);
    }
    const Eigen::MatrixXcd b0 = c.B.value();
    const Eigen::MatrixXcd zb0 = c.dzbar_dwbar.value();
    std::vector<cd> divphi(static_cast<std::size_t>(m)); // sum_i d_i phi^i_jbar at 0
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            divphi[static_cast<std::size_t>(j)] += partial(phi.at({i, j}), z(i)).value();
        }
    }
    {
        Sides s;
        const Jet lda = logdet(c.A);
        for (int b = 0; b < m; ++b) {
            s.lhs.push_back(chart_derivative(c, lda, b, true).value());
            cd r = 0;
            for (int j = 0; j < m; ++j) {
                r += zb0(j, b) * divphi[static_cast<std::size_t>(j)];
            }
            s.rhs.push_back(r);
        }
        out.parts.emplace_back("c1", s);
    }
    {
        Sides s;
        const Jet ldab = logdet(conj(c.A));
        for (int b = 0; b < m; ++b) {
            s.lhs.push_back(chart_derivative(c, ldab, b, true).value());
            cd r = 0;
            for (int j = 0; j < m; ++j) {
                for (int i = 0; i < m; ++i) {
                    for (int g = 0; g < m; ++g) {
                        r += std::conj(b0(j, b)) * std::conj(b0(i, g)) *
                             partial(conj(c.A(g, i)), zbar(j)).value();
                    }
                }
                for (int k = 0; k < m; ++k) {
                    r -= zb0(j, b) * phi.at({k, j}).value() * std::conj(divphi[static_cast<std::size_t>(k)]);
                }
            }
            s.rhs.push_back(r);
        }
        out.parts.emplace_back("c2", s);
    }
    {
        Sides s;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int b = 0; b < m; ++b) {
                    s.lhs.push_back(t_derivative(conj(c.B(j, b)), phi, i).value());
                    cd r = 0;
                    for (int k = 0; k < m; ++k) {
                        r -= std::conj(b0(k, b)) * std::conj(partial(phi.at({j, i}), z(k)).value());
                    }
                    s.rhs.push_back(r);
                }
            }
        }
        out.parts.emplace_back("c3", s);
    }
    {
        Sides s;
        for (int b = 0; b < m; ++b) {
            // X_b = b^l_b b^j_g d_l a^g_j
            Jet x;
            for (int l = 0; l < m; ++l) {
                for (int j = 0; j < m; ++j) {
                    for (int g = 0; g < m; ++g) {
                        accumulate(x, tmul(tmul(c.B(l, b), c.B(j, g)), partial(c.A(g, j), z(l))));
                    }
                }
            }
            const Jet xb = conj(x);
            for (int i = 0; i < m; ++i) {
                s.lhs.push_back(t_derivative(xb, phi, i).value());
                cd r = 0;
                for (int l = 0; l < m; ++l) {
                    for (int j = 0; j < m; ++j) {
                        r += b0(l, b) * partial(partial(phi.at({j, i}), z(j)), z(l)).value();
                    }
                }
                s.rhs.push_back(std::conj(r));
            }
        }
        out.parts.emplace_back("c4", s);
    }
    return out;
}

ConstraintSet theorem_e_constraints(bool divergence)
{
    ConstraintSet cs;
    cs.omega_compatible = 2;
    cs.integrable = 1;
    cs.fano_relation = 0;
    if (divergence) {
        cs.divergence_free = 1;
    }
    return cs;
}

// --- deformation along t psi -------------------------------------------------

Background fano_background(std::uint64_t seed, int m)
{
    Background bg = random_background(seed, m, 3, 3);
    bg.f = fano_adjust_weight(bg.f, bg.g);
    return bg;
}

Sides scalar_sides(const Background& bg, const VectorFormJet& psi)
{
    const DeformedChart c = build_deformed_chart(linear_path(psi));
    const JetMatrix gt = deformed_metric(c, bg.g);
    const JetMatrix ric = chart_hessian(c, logdet(gt)) * cd(-1);
    const JetMatrix gi = inverse(gt).transpose().truncated(ric.order(), ric.t_order());
    Jet s;
    for (int a = 0; a < gt.rows(); ++a) {
        for (int b = 0; b < gt.cols(); ++b) {
            accumulate(s, gi(a, b) * ric(a, b));
        }
    }
    const Connection c0 = connection(bg.g);
    // ds/dt = g^{i jbar} nabla_i (div psi)_jbar + conj, which is -(dbar* div psi + conj)
    const cd x = dbar_star_f(div_f(psi, c0), c0).value().value();
    return {{s.raw(0, 1)}, {-(x + std::conj(x))}};
}

Sides ricci_volume_sides(const Background& bg, const VectorFormJet& psi)
{
    const int m = bg.g.dim();
    const DeformedChart c = build_deformed_chart(linear_path(psi));
    const JetMatrix gt = deformed_metric(c, bg.g);
    const Jet f0 = lift(bg.f.f, 1);
    const JetMatrix h = chart_hessian(c, tadd(f0, logdet(gt)));
    const JetMatrix e = h * cd(-1) - gt.truncated(h.order(), h.t_order());
    const Connection c0 = connection(bg.g, bg.f);
    const FormJet d = div_f(psi, c0);
    Sides s;
    s.lhs = base_velocity(e);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            s.rhs.push_back(partial(d.at({k}), z(i)).value() + std::conj(partial(d.at({i}), z(k)).value()));
        }
    }
    return s;
}

IdentityReport make_report(std::string name, int m, int p, int q, std::uint64_t seed)
{
    IdentityReport r;
    r.name = std::move(name);
    r.m = m;
    r.p = p;
    r.q = q;
    r.seed = seed;
    return r;
}

} // namespace

double IdentityReport::detail(const std::string& key) const
{
    for (const auto& [k, v] : details) {
        if (k == key) {
            return v;
        }
    }
    throw Error("no detail named " + key);
}

FormJet random_form(std::uint64_t seed, int m, int p, int q, int order)
{
    auto rng = make_rng(seed, 3);
    FormJet eta = make_form(m, p, q, order);
    std::map<std::vector<int>, Jet> reps;
    for (std::size_t n = 0; n < eta.size(); ++n) {
        std::vector<int> idx = eta.unflatten(n);
        const std::span<const int> hol(idx.data(), static_cast<std::size_t>(p));
        const std::span<const int> anti(idx.data() + p, static_cast<std::size_t>(q));
        const int sign = permutation_sign(hol) * permutation_sign(anti);
        if (sign == 0) {
            continue;
        }
        std::sort(idx.begin(), idx.begin() + p);
        std::sort(idx.begin() + p, idx.end());
        auto it = reps.find(idx);
        if (it == reps.end()) {
            Jet j(m, order);
            for (int k = 0; k < j.block(); ++k) {
                j.raw(k) = disc_sample(rng);
            }
            j.set_real(false);
            it = reps.emplace(idx, j).first;
        }
        eta.flat(n) = it->second * cd(sign);
    }
    return eta;
}

VectorFormJet random_tangent_psi(std::uint64_t seed, int m, int order, const MetricJet& g, int closed_through,
                                 int compatible_through)
{
    auto rng = make_rng(seed, 4);
    VectorFormJet psi = make_vector_form(m, 1, order);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        Jet j(m, order);
        for (int n = 0; n < j.block(); ++n) {
            j.raw(n) = disc_sample(rng);
        }
        j.set_real(false);
        psi.flat(k) = j;
    }
    std::vector<JetConstraint> cs;
    cs.push_back({"closed", [](const TensorJet& x) { return dbar(x); }, 1, closed_through});
    cs.push_back({"omega_compatible", [g](const TensorJet& x) { return contract_omega(x, g); }, 0,
                  compatible_through});
    return project_constraints(psi, cs, nullptr);
}

VectorFormJet linear_path(const VectorFormJet& psi)
{
    VectorFormJet out(psi.dim(), psi.slots(), psi.order(), 1);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const Jet& a = psi.flat(k);
        Jet j(a.dim(), a.order(), 1);
        for (int n = 0; n < a.block(); ++n) {
            j.raw(n, 1) = a.raw(n, 0);
        }
        j.set_real(false);
        out.flat(k) = j;
    }
    return out;
}

IdentityReport check_bochner_kodaira(int m, int p, int q, std::uint64_t seed, bool weighted, const CheckOptions& opt)
{
    if (m < 1 || p < 0 || q < 0 || p > m || q > m) {
        throw ShapeError("Bochner-Kodaira check needs 0 <= p, q <= m");
    }
    IdentityReport r = make_report(weighted ? "bochner_kodaira_weighted" : "bochner_kodaira", m, p, q, seed);
    const Background bg = random_background(seed, m, 3, 3);
    const FormJet eta = random_form(seed, m, p, q, 3);
    if (weighted) {
        const WeightJet f = fano_adjust_weight(bg.f, bg.g);
        finish(r, bk_sides(eta, connection(bg.g, f), p, q, true), 1e-9, opt);
        if (opt.control && q > 0) {
            r.control_dropped = "fano_relation";
            r.control_residual = rel_diff(bk_sides(eta, connection(bg.g, bg.f), p, q, true));
        }
    } else {
        finish(r, bk_sides(eta, connection(bg.g), p, q, false), 1e-9, opt);
    }
    return r;
}

IdentityReport check_lemma_k1(int m, std::uint64_t seed, const CheckOptions& opt)
{
    if (m < 2) {
        throw ShapeError("lemma_k1 needs m >= 2");
    }
    IdentityReport r = make_report("lemma_k1", m, 0, 2, seed);
    const Background bg = fano_background(seed, m);
    const Connection c = connection(bg.g, bg.f);
    auto sides = [&](bool gauge) {
        ConstraintSet cs;
        cs.fano_relation = 0;
        cs.gauge = gauge ? 1 : -1;
        const VectorFormJet phi = random_constrained_phi(seed, m, 2, cs, bg.g, bg.f);
        const FormJet chi = contract_omega(phi, bg.g);
        const FormJet lhs = dbar(dbar_star_f(chi, c));
        const FormJet rhs = div_f(dbar(phi), c) * I1 + chi;
        return Sides{base_values(lhs), base_values(rhs)};
    };
    finish(r, sides(true), 1e-9, opt);
    if (opt.control) {
        r.control_dropped = "gauge";
        r.control_residual = rel_diff(sides(false));
    }
    return r;
}

IdentityReport check_prop6(int m, std::uint64_t seed, const CheckOptions& opt)
{
    IdentityReport r = make_report("prop6", m, 0, 1, seed);
    const Background bg = fano_background(seed, m);
    auto run = [&](bool compatible, std::vector<std::pair<std::string, double>>* details) {
        ConstraintSet cs;
        cs.integrable = 1;
        cs.omega_compatible = compatible ? 2 : -1;
        const VectorFormJet phi = random_constrained_phi(seed, m, 2, cs, bg.g, bg.f);
        const DeformedChart c = build_deformed_chart(phi);
        const int o = c.order();
        const MetricJet g = truncated_metric(bg.g, o);
        const JetMatrix gt = deformed_metric(c, g);
        const JetMatrix& pm = c.Phi;
        const JetMatrix pb = conj(pm);
        const JetMatrix id = JetMatrix::identity(m, m, o, 0);
        const JetMatrix mm = inverse(id - pm * pb);
        const JetMatrix closed = (mm * c.B).transpose() * g.g * conj(c.B);
        if (details) {
            // -i omega(T_i, T_jbar) = g_{i jbar} - g_{a bbar} phi^a_jbar conj(phi^b_ibar)
            JetMatrix pair = g.g - (pm.transpose() * g.g * pb).transpose();
            details->emplace_back("p8", rel_diff(full_sides(pair, g.g * (id - pb * pm))));
            details->emplace_back("p5", rel_diff(full_sides(c.A * (id - pm * pb) * c.dz_dw, id)));
            details->emplace_back("p5.1", rel_diff(full_sides(c.dz_dwbar, (pm * c.dzbar_dwbar) * cd(-1))));
            details->emplace_back("chart", chart_residual(c));
        }
        return full_sides(gt, closed);
    };
    finish(r, run(true, &r.details), 1e-9, opt);
    if (opt.control) {
        r.control_dropped = "omega_compatible";
        r.control_residual = rel_diff(run(false, nullptr));
    }
    return r;
}

IdentityReport check_theorem_e(int m, std::uint64_t seed, const CheckOptions& opt)
{
    IdentityReport r = make_report("theorem_e", m, 1, 1, seed);
    const Background bg = fano_background(seed, m);
    const VectorFormJet phi = random_constrained_phi(seed, m, 2, theorem_e_constraints(true), bg.g, bg.f);
    const RicciFormSides s = theorem_e_sides(bg, phi);
    finish(r, s.main, 1e-8, opt);
    for (const auto& [name, part] : s.parts) {
        r.details.emplace_back(name, rel_diff(part));
    }
    if (opt.control) {
        const VectorFormJet phi0 = random_constrained_phi(seed, m, 2, theorem_e_constraints(false), bg.g, bg.f);
        r.control_dropped = "divergence_free";
        r.control_residual = rel_diff(theorem_e_sides(bg, phi0).main);
    }
    return r;
}

IdentityReport check_complex_structure(int m, std::uint64_t seed, const CheckOptions& opt)
{
    IdentityReport r = make_report("complex_structure", m, 0, 1, seed);
    const Background bg = fano_background(seed, m);
    auto run = [&](bool compatible, std::vector<std::pair<std::string, double>>* details) {
        const VectorFormJet psi = random_tangent_psi(seed, m, 2, bg.g, 1, compatible ? 2 : -1);
        const DeformedChart c = build_deformed_chart(linear_path(psi));
        const JetMatrix j = complex_structure_tensor(c);
        const int o = j.order();
        const JetMatrix id = JetMatrix::identity(2 * m, m, o, 1);
        // omega as a bilinear form on (d/dz, d/dzbar): W(i, m+j) = i g, W(m+j, i) = -i g
        JetMatrix w(2 * m, 2 * m, m, o, 1);
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                const Jet gab = lift(bg.g.g(a, b).truncated(o), 1);
                w(a, m + b) = gab * I1;
                w(m + b, a) = gab * (-I1);
            }
        }
        const Sides compat = full_sides(j.transpose() * w * j, w);
        if (details) {
            details->emplace_back("j_squared", rel_diff(full_sides(j * j, id * cd(-1))));
            details->emplace_back("closed_form", rel_diff(full_sides(j, complex_structure_from_phi(c.phi))));
            Sides dj;
            dj.lhs = base_velocity(j);
            for (int a = 0; a < 2 * m; ++a) {
                for (int b = 0; b < 2 * m; ++b) {
                    cd v = 0;
                    if (a < m && b >= m) {
                        v = cd(0, 2) * psi.at({a, b - m}).value();
                    } else if (a >= m && b < m) {
                        v = cd(0, -2) * std::conj(psi.at({a - m, b}).value());
                    }
                    dj.rhs.push_back(v);
                }
            }
            details->emplace_back("first_variation", rel_diff(dj));
        }
        return compat;
    };
    finish(r, run(true, &r.details), 1e-9, opt);
    if (opt.control) {
        r.control_dropped = "omega_compatible";
        r.control_residual = rel_diff(run(false, nullptr));
    }
    return r;
}

IdentityReport check_scalar_linearization(int m, std::uint64_t seed, const CheckOptions& opt)
{
    IdentityReport r = make_report("scalar_linearization", m, 0, 0, seed);
    const Background bg = fano_background(seed, m);
    finish(r, scalar_sides(bg, random_tangent_psi(seed, m, 2, bg.g, 1, 2)), 1e-8, opt);
    if (opt.control) {
        r.control_dropped = "omega_compatible";
        r.control_residual = rel_diff(scalar_sides(bg, random_tangent_psi(seed, m, 2, bg.g, 1, -1)));
    }
    return r;
}

IdentityReport check_ricci_volume_variation(int m, std::uint64_t seed, const CheckOptions& opt)
{
    IdentityReport r = make_report("ricci_volume_variation", m, 1, 1, seed);
    const Background bg = fano_background(seed, m);
    finish(r, ricci_volume_sides(bg, random_tangent_psi(seed, m, 2, bg.g, 1, 2)), 1e-8, opt);
    if (opt.control) {
        r.control_dropped = "omega_compatible";
        r.control_residual = rel_diff(ricci_volume_sides(bg, random_tangent_psi(seed, m, 2, bg.g, 1, -1)));
        const Background raw = random_background(seed, m, 3, 3);
        r.details.emplace_back("without_fano_relation",
                               rel_diff(ricci_volume_sides(raw, random_tangent_psi(seed, m, 2, raw.g, 1, 2))));
    }
    return r;
}

IdentityReport check_coupled_bk(int k, int m, int q, std::uint64_t seed, const CheckOptions& opt)
{
    if (k < 1 || m < 1 || q < 0 || q > 1) {
        throw ShapeError("coupled Bochner-Kodaira check needs k >= 1, m >= 1 and q in {0, 1}");
    }
    IdentityReport r = make_report("coupled_bochner_kodaira", m, 0, q, seed);
    std::vector<MetricJet> gs;
    std::vector<WeightJet> fs;
    for (int a = 0; a < k; ++a) {
        const Background bg = random_background(mix_seed(seed, static_cast<std::uint64_t>(a)), m, 3, 3);
        gs.push_back(bg.g);
        fs.push_back(bg.f);
    }
    // common psi: a vector field for q = 1, a function for q = 0
    const FormJet psi = q == 1 ? random_tensor_field(seed, m, 3) : random_form(seed, m, 0, 0, 3);
    std::vector<FormJet> eta;
    for (int a = 0; a < k; ++a) {
        if (q == 0) {
            eta.push_back(psi);
            continue;
        }
        FormJet e = make_form(m, 0, 1, 3);
        for (int l = 0; l < m; ++l) {
            Jet s;
            for (int i = 0; i < m; ++i) {
                accumulate(s, tmul(gs[static_cast<std::size_t>(a)].g(i, l), psi.at({i})));
            }
            e.at({l}) = s;
        }
        eta.push_back(e.normalized());
    }
    auto run = [&](const std::vector<WeightJet>& weights) {
        Sides all;
        std::vector<cd> total(eta[0].size(), cd(0));
        for (const auto& e : eta) {
            const auto v = base_values(e);
            for (std::size_t n = 0; n < v.size(); ++n) {
                total[n] += v[n];
            }
        }
        for (int a = 0; a < k; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const Connection c = connection(gs[ua], weights[ua]);
            const FormJet& e = eta[ua];
            Sides s;
            s.lhs = base_values(laplacian_f(e, c));
            const TensorJet dd = covariant_derivative(covariant_derivative(e, c, true), c, false, true);
            const Eigen::MatrixXcd gi = c.ginv.value();
            for (std::size_t n = 0; n < e.size(); ++n) {
                const std::vector<int> idx = e.unflatten(n);
                cd v = static_cast<double>(q) * total[n];
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        std::vector<int> full{i, j};
                        full.insert(full.end(), idx.begin(), idx.end());
                        v -= gi(i, j) * dd.at(full).value();
                    }
                }
                s.rhs.push_back(v);
            }
            append(all, s);
        }
        return all;
    };
    finish(r, run(fano_adjust_weights(fs, gs)), 1e-9, opt);
    if (opt.control && q > 0 && k > 1) {
        std::vector<WeightJet> single;
        for (int a = 0; a < k; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            single.push_back(fano_adjust_weight(fs[ua], gs[ua]));
        }
        r.control_dropped = "coupled_fano_relation";
        r.control_residual = rel_diff(run(single));
    }
    return r;
}

} // namespace fanolab
