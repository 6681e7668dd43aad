// Signs, index placement and formats follow docs/conventions.md.

#include "support.hpp"

#include "fanolab/kahler/operators.hpp"

#include <doctest.h>

using namespace fanolab;
using namespace fanolab::testing;

namespace {

Jet flat_potential(int m, int order)
{
    Jet k(m, order);
    for (int i = 0; i < m; ++i) {
        k += Jet::variable(m, order, z(i)) * Jet::variable(m, order, zbar(i));
    }
    return real_part(k);
}

Jet fs_potential(int order, double scale = 2.0)
{
    const Jet x = Jet::variable(1, order, z(0)) * Jet::variable(1, order, zbar(0));
    Jet k = log(1.0 + x) * cd(scale);
    k.set_real(true);
    return k;
}

const cd I{0.0, 1.0};

} // namespace

TEST_CASE("flat potential gives the identity metric and no curvature")
{
    const auto g = metric_from_potential(flat_potential(3, 5));
    CHECK((g.g - JetMatrix::identity(3, 3, 3)).max_abs() == 0.0);
    const auto c = curvature(g);
    for (const auto& r : c.riemann) {
        CHECK(r.max_abs() == 0.0);
    }
    CHECK(c.ricci.max_abs() == 0.0);
}

TEST_CASE("indefinite Hessian is rejected")
{
    Jet k = flat_potential(2, 4);
    k -= Jet::variable(2, 4, z(1)) * Jet::variable(2, 4, zbar(1)) * cd(2.0);
    k.set_real(true);
    CHECK_THROWS_AS(metric_from_potential(k), NotAMetricError);
}

TEST_CASE("Fubini-Study on CP1 is Kaehler-Einstein")
{
    const auto g = metric_from_potential(fs_potential(6));
    CHECK(g.g(0, 0).value() == cd(2.0));
    const auto c = curvature(g);
    CHECK(c.R(0, 0, 0, 0).value().real() == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(diff(c.ricci(0, 0), g.g(0, 0)) <= 1e-12);
    // Holomorphic sectional curvature of g = 2/(1+|z|^2)^2 is constant: R = -g^2 / 1 at every order kept.
    CHECK(diff(c.R(0, 0, 0, 0), -tmul(g.g(0, 0), g.g(0, 0))) <= 1e-12);
    CHECK(c.scalar.value().real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random potentials give Hermitian metrics")
{
    std::mt19937_64 rng(21);
    for (int m = 1; m <= 3; ++m) {
        const auto g = metric_from_potential(random_potential(m, 5, rng));
        CHECK(hermitian_defect(g) <= 1e-15);
    }
}

TEST_CASE("both Ricci formulas agree")
{
    std::mt19937_64 rng(22);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + trial % 3;
        const auto g = metric_from_potential(random_potential(m, 5, rng));
        const auto c = curvature(g);
        const auto r2 = ricci_from_logdet(g);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                worst = std::max(worst, diff(c.ricci(i, j), r2(i, j)));
            }
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("Kaehler symmetries of the curvature tensor")
{
    std::mt19937_64 rng(23);
    for (int m = 2; m <= 3; ++m) {
        const auto g = metric_from_potential(random_potential(m, 6, rng));
        const auto c = curvature(g);
        double worst = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    for (int l = 0; l < m; ++l) {
                        worst = std::max(worst, diff(c.R(i, j, k, l), c.R(k, j, i, l)));
                        worst = std::max(worst, diff(c.R(i, j, k, l), c.R(i, l, k, j)));
                        worst = std::max(worst, diff(c.R(i, j, k, l), conj(c.R(j, i, l, k))));
                    }
                }
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("Ricci identities for vectors and forms")
{
    std::mt19937_64 rng(24);
    for (int m = 1; m <= 3; ++m) {
        const auto conn = connection(metric_from_potential(random_potential(m, 6, rng)));
        const auto& c = conn.curv;
        std::vector<std::pair<Slot, int>> cases{{Slot::up, 0}, {Slot::down, 1}, {Slot::down_bar, 2}};
        for (auto [slot, kind] : cases) {
            const TensorJet x = random_tensor(m, {slot}, 4, rng);
            // [nabla_i, nabla_jbar] x, slots (i, jbar, k) after both derivatives.
            const TensorJet a = covariant_derivative(covariant_derivative(x, conn, true), conn, false);
            TensorJet b = covariant_derivative(covariant_derivative(x, conn, false), conn, true);
            double worst = 0;
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    for (int k = 0; k < m; ++k) {
                        const Jet lhs = tadd(a.at({i, j, k}), -b.at({j, i, k}));
                        Jet rhs;
                        for (int l = 0; l < m; ++l) {
                            for (int q = 0; q < m; ++q) {
                                if (kind == 0) {
                                    accumulate(rhs, -tmul(tmul(conn.ginv(k, q), c.R(i, j, l, q)), x.at({l})));
                                } else if (kind == 1) {
                                    accumulate(rhs, tmul(tmul(conn.ginv(l, q), c.R(i, j, k, q)), x.at({l})));
                                } else {
                                    accumulate(rhs, -tmul(tmul(conn.ginv(q, l), c.R(i, j, q, k)), x.at({l})));
                                }
                            }
                        }
                        worst = std::max(worst, diff(lhs, rhs));
                    }
                }
            }
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("dbar squares to zero and matches the covariant form")
{
    std::mt19937_64 rng(25);
    for (int m = 1; m <= 3; ++m) {
        const auto conn = connection(metric_from_potential(random_potential(m, 6, rng)));
        for (int q = 0; q + 1 <= m && q <= 1; ++q) {
            for (int p = 0; p <= 1; ++p) {
                const FormJet exact = random_tensor(m, make_form(m, p, q, 0).slots(), 5, rng, 0, true);
                CHECK(dbar(dbar(exact)).max_abs() == 0.0);
                const FormJet eta = random_tensor(m, make_form(m, p, q, 0).slots(), 4, rng);
                CHECK(diff(dbar(eta), dbar_covariant(eta, conn)) <= 1e-12);
                CHECK(antisymmetry_defect(dbar(eta)) == 0.0);
            }
        }
    }
}

TEST_CASE("dbar of a constant 1-form vanishes and a hand example")
{
    FormJet c = make_form(2, 0, 1, 3);
    c.at({0}) = Jet::constant(2, 3, cd(1, 2));
    CHECK(dbar(c).max_abs() == 0.0);

    FormJet eta = make_form(2, 0, 1, 3);
    eta.at({0}) = Jet::variable(2, 3, zbar(1));
    const FormJet d = dbar(eta);
    CHECK(d.at({0, 1}).value() == cd(-1));
    CHECK(d.at({1, 0}).value() == cd(1));
    CHECK(d.at({0, 0}).max_abs() == 0.0);
}

TEST_CASE("dbar* hand examples")
{
    const auto conn = connection(metric_from_potential(flat_potential(1, 5)), WeightJet{Jet(1, 5)});
    CHECK(dbar_star_f(make_form(1, 0, 1, 3), conn).max_abs() == 0.0);
    FormJet eta = make_form(1, 0, 1, 3);
    eta.at({0}) = Jet::variable(1, 3, z(0));
    const FormJet s = dbar_star_f(eta, conn);
    CHECK(s.value().value() == cd(-1));
    CHECK(tadd(s.value(), Jet::constant(1, 2, 1.0)).max_abs() == 0.0);
}

TEST_CASE("Laplacian on functions")
{
    const auto conn = connection(metric_from_potential(flat_potential(1, 5)));
    CHECK(laplacian_f(function_form(Jet::constant(1, 4, 3.0)), conn).max_abs() == 0.0);
    const Jet u = Jet::variable(1, 4, z(0)) * Jet::variable(1, 4, zbar(0));
    CHECK(diff(laplacian_f(function_form(u), conn).value(), Jet::constant(1, 2, -1.0)) == 0.0);

    std::mt19937_64 rng(26);
    for (int m = 1; m <= 3; ++m) {
        const auto g = metric_from_potential(random_potential(m, 6, rng));
        const auto cf = connection(g, WeightJet{random_potential(m, 5, rng)});
        const Jet v = random_jet(m, 4, rng);
        Jet rhs;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const Jet dv = partial(v, zbar(j));
                accumulate(rhs, -tmul(cf.ginv(i, j), tadd(partial(dv, z(i)), tmul(cf.df[static_cast<std::size_t>(i)], dv))));
            }
        }
        CHECK(diff(laplacian_f(function_form(v), cf).value(), rhs) <= 1e-12);
        const FormJet lhs = dbar(laplacian_f(function_form(v), cf));
        const FormJet other = laplacian_f(dbar(function_form(v)), cf);
        CHECK(diff(lhs, other) <= 1e-9);
    }
}

TEST_CASE("contraction with the Kaehler form")
{
    const auto g2 = metric_from_potential(flat_potential(2, 4));
    VectorFormJet phi = make_vector_form(2, 1, 2);
    phi.at({0, 1}) = Jet::constant(2, 2, 1.0);
    const FormJet chi = contract_omega(phi, g2);
    // psi_{1bar 2bar} = phi_{1bar 2bar} - phi_{2bar 1bar} = 1, output -i psi.
    CHECK(chi.at({0, 1}).value() == -I);
    CHECK(chi.at({1, 0}).value() == I);

    VectorFormJet sym = make_vector_form(2, 1, 2);
    sym.at({0, 1}) = Jet::constant(2, 2, 1.0);
    sym.at({1, 0}) = Jet::constant(2, 2, 1.0);
    CHECK(contract_omega(sym, g2).max_abs() == 0.0);

    std::mt19937_64 rng(27);
    const auto g1 = metric_from_potential(random_potential(1, 5, rng));
    CHECK(contract_omega(random_tensor(1, {Slot::up, Slot::down_bar}, 3, rng), g1).max_abs() == 0.0);
}

TEST_CASE("divergence examples")
{
    const auto conn = connection(metric_from_potential(flat_potential(2, 4)), WeightJet{Jet(2, 4)});
    VectorFormJet c = make_vector_form(2, 1, 3);
    c.at({0, 1}) = Jet::constant(2, 3, cd(2, 1));
    CHECK(div_f(c, conn).max_abs() == 0.0);
    VectorFormJet x = make_vector_form(2, 0, 3);
    x.at({0}) = Jet::variable(2, 3, z(0));
    CHECK(diff(div_f(x, conn).value(), Jet::constant(2, 2, 1.0)) == 0.0);
}

TEST_CASE("gradient fields and holomorphy")
{
    const auto g = metric_from_potential(flat_potential(2, 5));
    const auto conn = connection(g);
    CHECK(grad_field(Jet::variable(2, 4, z(0)), conn).max_abs() == 0.0);
    const VectorFormJet x = grad_field(Jet::variable(2, 4, zbar(0)), conn);
    CHECK(diff(x.at({0}), Jet::constant(2, 3, 1.0)) == 0.0);
    CHECK(x.at({1}).max_abs() == 0.0);
    CHECK(holomorphy_residual(x, g) == 0.0);

    const int order = 6;
    const auto gfs = metric_from_potential(fs_potential(order));
    const auto cfs = connection(gfs);
    const Jet zz = Jet::variable(1, order - 1, z(0));
    const Jet zb = Jet::variable(1, order - 1, zbar(0));
    const Jet den = inverse(1.0 + zz * zb);
    const std::vector<Jet> eig{(1.0 - zz * zb) * den, zz * den, zb * den};
    for (const auto& u : eig) {
        const VectorFormJet v = grad_field(u, cfs);
        CHECK(holomorphy_residual(v, gfs) <= 1e-12);
    }
    // A non-eigenfunction gives a non-holomorphic field.
    CHECK(holomorphy_residual(grad_field(tmul(zz * zb, zz * zb), cfs), gfs) > 0.1);
}

TEST_CASE("bracket: constants, Jacobi and Leibniz")
{
    VectorFormJet c = make_vector_form(2, 1, 3);
    c.at({0, 1}) = Jet::constant(2, 3, 1.0);
    c.at({1, 0}) = Jet::constant(2, 3, cd(0, 2));
    CHECK(bracket(c, c).max_abs() == 0.0);

    std::mt19937_64 rng(28);
    for (int m = 2; m <= 3; ++m) {
        for (int trial = 0; trial < 4; ++trial) {
            const int qa = trial % 2;
            const int qb = (trial / 2) % 2;
            const int qc = 1 - qa;
            auto vf = [&](int q) { return random_tensor(m, make_vector_form(m, q, 0).slots(), 4, rng); };
            const VectorFormJet a = vf(qa);
            const VectorFormJet b = vf(qb);
            const VectorFormJet cc = vf(qc);
            const double sab = (qa * qb) % 2 ? -1.0 : 1.0;
            // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
            const TensorJet lhs = bracket(a, bracket(b, cc));
            const TensorJet rhs = bracket(bracket(a, b), cc) + bracket(b, bracket(a, cc)) * cd(sab);
            CHECK(diff(lhs, rhs) <= 1e-10);
            // graded antisymmetry
            CHECK(diff(bracket(a, b), bracket(b, a) * cd(-sab)) <= 1e-12);
            // dbar [a,b] = [dbar a, b] + (-1)^{|a|} [a, dbar b]
            const double sa = qa % 2 ? -1.0 : 1.0;
            const TensorJet l2 = dbar(bracket(a, b));
            const TensorJet r2 = bracket(dbar(a), b) + bracket(a, dbar(b)) * cd(sa);
            CHECK(diff(l2, r2) <= 1e-10);
        }
    }
}

TEST_CASE("bracket normalization makes dbar phi = [phi,phi]/2 the integrability condition")
{
    // T_jbar = d_jbar - phi^i_jbar d_i is involutive iff
    // d_jbar phi^i_kbar - d_kbar phi^i_jbar = phi^l_jbar d_l phi^i_kbar - phi^l_kbar d_l phi^i_jbar.
    std::mt19937_64 rng(29);
    const int m = 2;
    const VectorFormJet phi = random_tensor(m, make_vector_form(m, 1, 0).slots(), 4, rng);
    const TensorJet half = bracket(phi, phi) * cd(0.5);
    VectorFormJet frob = make_vector_form(m, 2, 3);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                Jet s(m, 3);
                for (int l = 0; l < m; ++l) {
                    s += tmul(phi.at({l, j}), partial(phi.at({i, k}), z(l))) -
                         tmul(phi.at({l, k}), partial(phi.at({i, j}), z(l)));
                }
                frob.at({i, j, k}) = s;
            }
        }
    }
    CHECK(diff(half, frob) <= 1e-12);
}

TEST_CASE("Ricci potential update")
{
    std::mt19937_64 rng(30);
    for (int m = 1; m <= 3; ++m) {
        const int order = 6;
        const Jet k0 = random_potential(m, order, rng);
        const auto g0 = metric_from_potential(k0);
        // Ric(g0) - g0 = ddbar f0 with f0 = -log det g0 - K0.
        const WeightJet f0{tadd(-logdet(g0.g), -k0)};
        const WeightJet same = ricci_potential_from_potentials(f0, Jet(m, order), g0, g0);
        CHECK(diff(same.f, f0.f) <= 1e-14);

        Jet psi = random_potential(m, order, rng, 0.2);
        for (int i = 0; i < m; ++i) {
            psi -= Jet::variable(m, order, z(i)) * Jet::variable(m, order, zbar(i)) * cd(0.5);
        }
        psi = real_part(psi);
        const auto g1 = metric_from_potential(k0 + psi);
        const WeightJet f1 = ricci_potential_from_potentials(f0, psi, g0, g1);
        CHECK(f1.f.is_real());
        const auto r1 = ricci_from_logdet(g1);
        double worst = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const Jet lhs = tadd(r1(i, j), -g1.g(i, j));
                worst = std::max(worst, diff(lhs, partial(partial(f1.f, zbar(j)), z(i))));
            }
        }
        CHECK(worst <= 1e-10);
    }
}
