// Signs, index placement and formats follow docs/conventions.md.

#include "fanolab/kuranishi/io.hpp"

#include <doctest.h>

using namespace fanolab;
using namespace fanolab::kuranishi;

namespace {

VectorQ vec(std::initializer_list<Rational> xs)
{
    VectorQ v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) {
        v(i++) = x;
    }
    return v;
}

std::filesystem::path data(const std::string& name)
{
    return std::filesystem::path(FANOLAB_DATA_DIR) / "dgla" / (name + ".json");
}

bool has_violation(const ValidationReport& r, const std::string& axiom, const std::vector<BasisElement>& witness)
{
    for (const auto& v : r.violations) {
        if (v.axiom == axiom && v.witness == witness) {
            return true;
        }
    }
    return false;
}

/// e1, e2, e3 in degree 1, h in degree 2; d e3 = h, [e1, e2] = [e2, e1] = h.
Dgla two_parameter()
{
    Dgla d({1, 2}, {3, 1}, "two_parameter");
    MatrixQ m = zero_matrix(1, 3);
    m(0, 2) = 1;
    d.set_differential(1, m);
    d.add_bracket({1, 0}, {1, 1}, 0, 1);
    d.add_bracket({1, 1}, {1, 0}, 0, 1);
    return d;
}

} // namespace

TEST_CASE("rationals")
{
    CHECK(Rational::parse("3/4").str() == "3/4");
    CHECK(Rational::parse("-6/8").str() == "-3/4");
    CHECK(Rational::parse("+5").str() == "5");
    CHECK(Rational::parse(" 10 / 4 ") == Rational(5, 2));
    CHECK_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1) / Rational(0), SingularError);
    CHECK(to_double(Rational(1, 3)) == doctest::Approx(1.0 / 3));

    MatrixQ a(3, 3);
    a << 2, 1, 0, 1, 3, Rational(1, 2), 0, Rational(1, 2), 1;
    CHECK(is_zero(MatrixQ(a * inverse(a) - identity_matrix(3))));
    CHECK(is_symmetric_positive_definite(a));
    MatrixQ b(2, 2);
    b << 1, 2, 2, 1;
    CHECK_FALSE(is_symmetric_positive_definite(b));
    MatrixQ s(2, 3);
    s << 1, 2, 3, 2, 4, 6;
    const MatrixQ k = null_space(s);
    CHECK(k.cols() == 2);
    CHECK(is_zero(MatrixQ(s * k)));
    CHECK_THROWS_AS(inverse(s.leftCols(2)), SingularError);
}

TEST_CASE("abelian DGLA: H = I, G = 0, phi is its linear term")
{
    const Dgla d = builtin_dgla("abelian");
    const ValidationReport r = dgla_validate(d);
    REQUIRE(r.valid());
    const HodgeData& h = *r.hodge;
    for (int k : d.degrees()) {
        CHECK(h.at(k).harmonic == identity_matrix(d.dim(k)));
        CHECK(is_zero(h.at(k).green));
    }
    const auto lin = harmonic_degree_one(h);
    REQUIRE(lin.size() == 2);
    const KuranishiSolution s = kuranishi_solve(d, h, lin, 6);
    CHECK_FALSE(s.obstructed());
    CHECK(s.phi == FormalSeries::linear(1, lin, 6));
    CHECK(s.mc_residual.is_zero());
    CHECK(s.gauge_residual.is_zero());
    CHECK(s.solved_order() == 6);
}

TEST_CASE("three-element DGLA")
{
    const Dgla d = builtin_dgla("three_element");
    const ValidationReport r = dgla_validate(d);
    REQUIRE(r.valid());
    const HodgeData& h = *r.hodge;
    CHECK(h.identities_hold());
    CHECK(h.at(1).harmonic_basis.cols() == 1);
    CHECK(h.at(2).harmonic_basis.cols() == 0);

    const KuranishiSolution s = kuranishi_solve(d, h, {vec({1, 0})}, 8);
    CHECK_FALSE(s.obstructed());
    CHECK(s.solved_order() == 8);
    // t e1 + t^2 e2 and nothing else
    REQUIRE(s.phi.coefficients().size() == 2);
    CHECK(s.phi.coefficient({1}) == vec({1, 0}));
    CHECK(s.phi.coefficient({2}) == vec({0, 1}));
    CHECK(s.mc_residual.is_zero());
    CHECK(s.mc_residual.order() == 8);
    CHECK(s.gauge_residual.is_zero());
    CHECK(gauge_residual(h, s.phi).is_zero());
    CHECK(apply(h.at(1).harmonic, 1, s.phi.homogeneous(1)) == s.phi.homogeneous(1));

    SUBCASE("stopping at order 1 leaves -t^2 e3")
    {
        const FormalSeries res = mc_residual(d, truncate(s.phi, 1), 2);
        REQUIRE(res.coefficients().size() == 1);
        CHECK(res.coefficient({2}) == vec({-1}));
    }
    SUBCASE("re-solving gives identical coefficients")
    {
        const KuranishiSolution again = kuranishi_solve(d, h, {vec({1, 0})}, 8);
        CHECK(again.phi == s.phi);
        CHECK(to_json(again).dump() == to_json(s).dump());
    }
    SUBCASE("non-harmonic linear data")
    {
        CHECK_THROWS_AS(kuranishi_solve(d, h, {vec({0, 1})}, 3), GaugeError);
        CHECK_THROWS_AS(kuranishi_solve(d, h, {vec({1})}, 3), ShapeError);
        CHECK_THROWS_AS(kuranishi_solve(d, h, {vec({1, 0})}, 0), ShapeError);
    }
}

TEST_CASE("obstructed DGLA halts at order 2")
{
    const Dgla d = builtin_dgla("obstructed");
    const ValidationReport r = dgla_validate(d);
    REQUIRE(r.valid());
    const KuranishiSolution s = kuranishi_solve(d, *r.hodge, harmonic_degree_one(*r.hodge), 5);
    REQUIRE(s.obstructed());
    CHECK(s.obstruction->order == 2);
    CHECK(s.obstruction->index == MultiIndex{2});
    CHECK(s.obstruction->component == vec({1}));
    CHECK(s.solved_order() == 1);
    CHECK(s.status == std::vector<OrderStatus>{OrderStatus::solved, OrderStatus::obstructed, OrderStatus::not_reached,
                                               OrderStatus::not_reached, OrderStatus::not_reached});
    // the residual of what was solved shows the obstruction
    CHECK(s.mc_residual.coefficient({2}) == vec({Rational(-1, 2)}));
}

TEST_CASE("two parameters: multi-index convolution in the solve")
{
    const Dgla d = two_parameter();
    const ValidationReport r = dgla_validate(d);
    REQUIRE(r.valid());
    const KuranishiSolution s = kuranishi_solve(d, *r.hodge, {vec({1, 0, 0}), vec({0, 1, 0})}, 6);
    CHECK_FALSE(s.obstructed());
    REQUIRE(s.phi.coefficients().size() == 3);
    CHECK(s.phi.coefficient({1, 1}) == vec({0, 0, 1}));
    CHECK(s.phi.coefficient({2, 0}) == vec({0, 0, 0}));
    CHECK(s.mc_residual.is_zero());
}

TEST_CASE("the inner product enters through the adjoint")
{
    const Dgla d = load_dgla(data("weighted"));
    const ValidationReport r = dgla_validate(d);
    REQUIRE(r.valid());
    const HodgeData& h = *r.hodge;
    CHECK(h.identities_hold());
    // H^1 = span(e3), M-orthogonal to d e^0 = e1
    const auto lin = harmonic_degree_one(h);
    REQUIRE(lin.size() == 1);
    CHECK(lin[0] == vec({0, 0, 1}));
    const KuranishiSolution s = kuranishi_solve(d, h, lin, 6);
    CHECK_FALSE(s.obstructed());
    // by hand: d^* h1 = M1^-1 d^T M2 h1 = (-2/7, 8/7, 0), Delta h1 = 8/7 h1
    CHECK(s.phi.coefficient({2}) == vec({Rational(-1, 8), Rational(1, 2), 0}));
    CHECK(s.phi.coefficients().size() == 2);
    CHECK(s.mc_residual.is_zero());
    CHECK(s.gauge_residual.is_zero());

    // with the identity inner product the same data give phi_2 = e2 / 2
    Dgla flat(d.degrees(), {1, 3, 2});
    for (int k : d.degrees()) {
        if (d.has_differential(k)) {
            flat.set_differential(k, d.differential(k));
        }
    }
    for (const auto& e : d.bracket_entries()) {
        flat.add_bracket(e.left, e.right, e.result, e.c);
    }
    const ValidationReport fr = dgla_validate(flat);
    REQUIRE(fr.valid());
    const KuranishiSolution fs = kuranishi_solve(flat, *fr.hodge, lin, 4);
    CHECK(fs.phi.coefficient({2}) == vec({0, Rational(1, 2), 0}));
}

TEST_CASE("axiom violations carry witnesses")
{
    SUBCASE("graded Leibniz")
    {
        const ValidationReport r = dgla_validate(load_dgla(data("broken_leibniz")));
        CHECK_FALSE(r.valid());
        CHECK_FALSE(r.hodge.has_value());
        CHECK(has_violation(r, "graded Leibniz", {{0, 0}, {1, 1}}));
        CHECK(r.failures.count("graded antisymmetry") == 0);
        CHECK(r.failures.count("graded Jacobi") == 0);
        CHECK_THROWS_AS(r.require_valid(), AxiomError);
        try {
            r.require_valid();
        } catch (const AxiomError& e) {
            CHECK(e.axiom() == "graded Leibniz");
            CHECK(std::string(e.what()).find("e^0_0") != std::string::npos);
        }
    }
    SUBCASE("graded antisymmetry")
    {
        Dgla d = builtin_dgla("three_element");
        d.add_bracket({1, 0}, {1, 1}, 0, 1);
        const ValidationReport r = dgla_validate(d);
        CHECK(has_violation(r, "graded antisymmetry", {{1, 0}, {1, 1}}));
        CHECK(has_violation(r, "graded antisymmetry", {{1, 1}, {1, 0}}));
    }
    SUBCASE("d o d")
    {
        Dgla d({0, 1, 2}, {1, 1, 1});
        d.set_differential(0, MatrixQ::Constant(1, 1, Rational(1)));
        d.set_differential(1, MatrixQ::Constant(1, 1, Rational(2)));
        const ValidationReport r = dgla_validate(d);
        REQUIRE(r.failures.count("d o d = 0") == 1);
        CHECK(r.violations.front().witness == std::vector<BasisElement>{{0, 0}});
        CHECK(r.violations.front().defect == Rational(2));
    }
    SUBCASE("graded Jacobi")
    {
        // [a,b] = b, [a,c] = c, [b,c] = a in degree 0
        Dgla d({0}, {3});
        const auto add = [&](int i, int j, int k) {
            d.add_bracket({0, i}, {0, j}, k, 1);
            d.add_bracket({0, j}, {0, i}, k, -1);
        };
        add(0, 1, 1);
        add(0, 2, 2);
        add(1, 2, 0);
        const ValidationReport r = dgla_validate(d);
        CHECK(r.failures.count("graded antisymmetry") == 0);
        CHECK(has_violation(r, "graded Jacobi", {{0, 0}, {0, 1}, {0, 2}}));
    }
    SUBCASE("inner product")
    {
        Dgla d({1}, {2});
        MatrixQ m(2, 2);
        m << 1, 2, 2, 1;
        d.set_inner_product(1, m);
        CHECK(dgla_validate(d).failures.count("inner product") == 1);
    }
    SUBCASE("shapes")
    {
        Dgla d({1, 2}, {2, 1});
        CHECK_THROWS_AS(d.set_differential(1, zero_matrix(2, 2)), ShapeError);
        CHECK_THROWS_AS(d.add_bracket({1, 0}, {1, 0}, 3, 1), ShapeError);
        CHECK_THROWS_AS(d.add_bracket({1, 0}, {2, 0}, 0, 1), ShapeError);
        CHECK_THROWS_AS(Dgla({2, 1}, {1, 1}), ShapeError);
    }
}

TEST_CASE("series operations")
{
    const Dgla d = builtin_dgla("three_element");
    SUBCASE("convolution: t1 times t2 lands at (1,1)")
    {
        FormalSeries a(2, 3, 1, 2);
        FormalSeries b(2, 3, 1, 2);
        a.set({1, 0}, vec({1, 0}));
        b.set({0, 1}, vec({1, 0}));
        const FormalSeries c = bracket(d, a, b);
        REQUIRE(c.coefficients().size() == 1);
        CHECK(c.coefficient({1, 1}) == vec({2}));
        CHECK(c.degree() == 2);
    }
    SUBCASE("bracket of an odd element with itself")
    {
        const FormalSeries a = FormalSeries::linear(1, {vec({1, 0})}, 2);
        CHECK_FALSE(bracket(d, a, a).is_zero());
    }
    SUBCASE("d d = 0")
    {
        const Dgla w = load_dgla(data("weighted"));
        FormalSeries a(1, 3, 0, 1);
        a.set({1}, vec({1}));
        a.set({3}, vec({Rational(-2, 3)}));
        CHECK_FALSE(apply_d(w, a).is_zero());
        CHECK(apply_d(w, apply_d(w, a)).is_zero());
    }
    SUBCASE("truncation and shapes")
    {
        FormalSeries a(1, 4, 1, 2);
        a.set({1}, vec({1, 0}));
        a.set({4}, vec({0, 1}));
        CHECK(truncate(a, 2).coefficients().size() == 1);
        CHECK(truncate(a, 2).order() == 2);
        CHECK_THROWS_AS(truncate(a, 5), ShapeError);
        CHECK_THROWS_AS(a.set({5}, vec({1, 0})), ShapeError);
        CHECK_THROWS_AS(a.set({1, 0}, vec({1, 0})), ShapeError);
        CHECK_THROWS_AS(a.set({1}, vec({1})), ShapeError);
        CHECK_THROWS_AS(a + FormalSeries(1, 3, 1, 2), ShapeError);
        CHECK_THROWS_AS(a + FormalSeries(1, 4, 2, 1), ShapeError);
        CHECK((a - a).is_zero());
        a.set({4}, vec({0, 0}));
        CHECK(a.coefficients().size() == 1);
    }
    SUBCASE("multi-indices")
    {
        CHECK(multi_indices(2, 2) == std::vector<MultiIndex>{{0, 2}, {1, 1}, {2, 0}});
        CHECK(multi_indices(3, 2).size() == 6);
        CHECK(multi_indices(0, 0).size() == 1);
    }
}

TEST_CASE("DGLA files")
{
    for (const auto& name : builtin_names()) {
        const Dgla file = load_dgla(data(name));
        CHECK(to_json(file).dump() == to_json(builtin_dgla(name)).dump());
        CHECK(to_json(dgla_from_json(to_json(file))).dump() == to_json(file).dump());
    }
    CHECK(to_json(dgla_from_json(to_json(load_dgla(data("weighted"))))) == to_json(load_dgla(data("weighted"))));
    CHECK_THROWS_AS(builtin_dgla("none"), FormatError);
    CHECK_THROWS_AS(load_dgla(data("missing")), FormatError);
    CHECK_THROWS_AS(dgla_from_json(json::parse(R"({"degrees": [1], "dims": [1], "bracket": [{"left": [1, 0]}]})")),
                    FormatError);
    CHECK_THROWS_AS(
        dgla_from_json(json::parse(R"({"degrees": [1, 2], "dims": [1, 1], "differential": [{"degree": 1, "matrix": [["x"]]}]})")),
        FormatError);
    CHECK_THROWS_AS(
        dgla_from_json(json::parse(R"({"degrees": [1, 2], "dims": [1, 1], "differential": [{"degree": 1, "matrix": [["1", "2"]]}]})")),
        FormatError);

    const json lin = json::parse(R"({"linear": [["1", "0"]]})");
    const auto v = linear_from_json(lin, builtin_dgla("three_element"));
    REQUIRE(v.has_value());
    CHECK(v->front() == vec({1, 0}));
    CHECK_FALSE(linear_from_json(json::object(), builtin_dgla("three_element")).has_value());

    const ValidationReport r = dgla_validate(builtin_dgla("three_element"));
    const json j = to_json(r);
    CHECK(j["valid"] == true);
    CHECK(j["harmonic_dims"]["1"] == 1);
    CHECK(j["hodge_identities"] == true);
}
