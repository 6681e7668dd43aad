// Signs, index placement and formats follow docs/conventions.md.

#include "support.hpp"

#include "fanolab/jets/jet_matrix.hpp"

#include <doctest.h>

using namespace fanolab;
using fanolab::testing::cd;
using fanolab::testing::integer_jet;
using fanolab::testing::random_jet;

TEST_CASE("polynomial product truncates")
{
    const Jet one = Jet::constant(1, 2, 1.0);
    const Jet z1 = Jet::variable(1, 2, z(0));
    const Jet p = (one + z1) * (one - z1);
    CHECK(p.coeff({0, 0}) == cd(1));
    CHECK(p.coeff({1, 0}) == cd(0));
    CHECK(p.coeff({2, 0}) == cd(-1));
    CHECK((p - (one - z1 * z1)).max_abs() == 0.0);
}

TEST_CASE("log inverts exp")
{
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 3; ++m) {
        for (int order = 1; order <= 4; ++order) {
            Jet j = random_jet(m, order, rng, 1);
            j.raw(0) = 0;
            CHECK(max_abs_diff(log(exp(j)), j) <= 1e-12);
            Jet a = random_jet(m, order, rng);
            a.raw(0) = cd(2.0, 0.5);
            CHECK(max_abs_diff(exp(log(a)), a) <= 1e-12);
        }
    }
}

TEST_CASE("conj swaps holomorphic and antiholomorphic exponents")
{
    Jet j(2, 3);
    j.set_coeff({1, 0, 0, 1}, cd(2, 3));
    const Jet c = conj(j);
    CHECK(c.coeff({0, 1, 1, 0}) == cd(2, -3));
    CHECK(c.coeff({1, 0, 0, 1}) == cd(0));
}

TEST_CASE("conj is an involution and real parts are fixed")
{
    std::mt19937_64 rng(12);
    for (int m = 1; m <= 3; ++m) {
        const Jet j = random_jet(m, 4, rng, 1);
        CHECK(conj(conj(j)) == j);
        const Jet r = real_part(j);
        CHECK(r.is_real());
        CHECK(reality_defect(r) == 0.0);
        CHECK(log(exp(r) + 1.0).is_real());
    }
}

TEST_CASE("division and log of a zero constant term are singular")
{
    const Jet z1 = Jet::variable(1, 3, z(0));
    CHECK_THROWS_AS(inverse(z1), SingularError);
    CHECK_THROWS_AS(log(z1), SingularError);
    CHECK_THROWS_AS(Jet::constant(1, 3, 1.0) / z1, SingularError);
}

TEST_CASE("mixed shapes are rejected")
{
    const Jet a(1, 3);
    const Jet b(1, 2);
    const Jet c(2, 3);
    const Jet d(1, 3, 1);
    CHECK_THROWS_AS(a + b, ShapeError);
    CHECK_THROWS_AS(a * c, ShapeError);
    CHECK_THROWS_AS(a * d, ShapeError);
    CHECK(tmul(a, b).order() == 2);
}

TEST_CASE("partial derivatives")
{
    const int m = 1;
    const Jet zz = Jet::variable(m, 3, z(0));
    const Jet zb = Jet::variable(m, 3, zbar(0));
    const Jet d = partial(zz * zb, z(0));
    CHECK(d.order() == 2);
    CHECK((d - Jet::variable(m, 2, zbar(0))).max_abs() == 0.0);
    CHECK_THROWS_AS(partial(Jet(1, 0), z(0)), DegreeError);
    CHECK_THROWS_AS(partial(Jet(1, 2), tvar()), DegreeError);
}

TEST_CASE("second derivative of log(1+|z|^2) is the series of (1+|z|^2)^-2")
{
    const int order = 6;
    const Jet x = Jet::variable(1, order, z(0)) * Jet::variable(1, order, zbar(0));
    const Jet k = log(1.0 + x);
    const Jet g = partial(partial(k, zbar(0)), z(0));
    REQUIRE(g.order() == order - 2);
    // (1+x)^-2 = sum (-1)^n (n+1) x^n
    for (int n = 0; 2 * n <= order - 2; ++n) {
        const double expect = (n % 2 ? -1.0 : 1.0) * (n + 1);
        CHECK(g.coeff({n, n}).real() == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(g.coeff({1, 0}) == cd(0));
}

TEST_CASE("mixed partials commute exactly")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + trial % 3;
        const Jet j = random_jet(m, 4, rng);
        for (int u = 0; u < 2 * m; ++u) {
            for (int v = 0; v < 2 * m; ++v) {
                const Var a = u < m ? z(u) : zbar(u - m);
                const Var b = v < m ? z(v) : zbar(v - m);
                CHECK(partial(partial(j, a), b) == partial(partial(j, b), a));
            }
        }
    }
}

TEST_CASE("ring axioms and Leibniz rule hold exactly")
{
    std::mt19937_64 rng(14);
    for (int order = 2; order <= 4; ++order) {
        for (int m = 1; m <= 3; ++m) {
            for (int trial = 0; trial < 200; ++trial) {
                const Jet a = integer_jet(m, order, rng, trial % 2);
                const Jet b = integer_jet(m, order, rng, trial % 2);
                const Jet c = integer_jet(m, order, rng, trial % 2);
                REQUIRE((a * b) * c == a * (b * c));
                REQUIRE(a * (b + c) == a * b + a * c);
                REQUIRE(a * b == b * a);
                const Var v = trial % 2 ? z(trial % m) : zbar(trial % m);
                REQUIRE(partial(a * b, v) == tmul(partial(a, v), b) + tmul(a, partial(b, v)));
            }
        }
    }
}

TEST_CASE("t is independent of the chart variables")
{
    const Jet t = Jet::variable(2, 3, tvar(), 1);
    const Jet z1 = Jet::variable(2, 3, z(0), 1);
    const Jet p = t * z1;
    CHECK(p.coeff({1, 0, 0, 0}, 1) == cd(1));
    CHECK((t * t).max_abs() == 0.0);
    CHECK(partial(p, tvar()).t_order() == 0);
    CHECK((partial(p, tvar()) - Jet::variable(2, 3, z(0))).max_abs() == 0.0);
}

TEST_CASE("jet matrix identity, determinant and inverse")
{
    const int m = 1;
    const int order = 3;
    const JetMatrix id = JetMatrix::identity(2, m, order);
    CHECK((inverse(id) - id).max_abs() == 0.0);

    const Jet one = Jet::constant(m, order, 1.0);
    const Jet zz = Jet::variable(m, order, z(0));
    const Jet zb = Jet::variable(m, order, zbar(0));
    JetMatrix a(2, 2, m, order);
    a(0, 0) = one + zz;
    a(0, 1) = zb;
    a(1, 0) = zz;
    a(1, 1) = one;
    CHECK(det(a) == (one + zz) - zb * zz);
    CHECK((a * inverse(a) - JetMatrix::identity(2, m, order)).max_abs() <= 1e-14);
    CHECK(max_abs_diff(logdet(a), log((one + zz) - zb * zz)) == 0.0);
}

TEST_CASE("inverse of I - N matches the Neumann series for nilpotent N")
{
    std::mt19937_64 rng(15);
    for (int n = 2; n <= 4; ++n) {
        const int m = 2;
        const int order = 3;
        JetMatrix nil(n, n, m, order);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                nil(i, j) = integer_jet(m, order, rng);
            }
        }
        const JetMatrix id = JetMatrix::identity(n, m, order);
        JetMatrix series = id;
        JetMatrix p = id;
        for (int k = 1; k < n; ++k) {
            p = p * nil;
            series = series + p;
        }
        const JetMatrix inv = inverse(id - nil);
        CHECK((inv - series).max_abs() == 0.0);
        CHECK(((id - nil) * inv - id).max_abs() == 0.0);
    }
}

TEST_CASE("singular constant matrix is rejected")
{
    JetMatrix a(2, 2, 1, 2);
    a(0, 0) = Jet::variable(1, 2, z(0));
    a(1, 1) = Jet::constant(1, 2, 1.0);
    CHECK_THROWS_AS(inverse(a), SingularError);
    CHECK_THROWS_AS(logdet(a), SingularError);
}
