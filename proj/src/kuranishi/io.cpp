#include "fanolab/kuranishi/io.hpp"

#include <fstream>

namespace fanolab::kuranishi {

namespace {

Rational rational_from(const json& v)
{
    if (v.is_number_integer()) {
        return Rational(v.get<long long>());
    }
    if (v.is_string()) {
        try {
            return Rational::parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }
    throw FormatError("expected a rational (\"p/q\" string or integer), got " + v.dump());
}

MatrixQ matrix_from(const json& rows, Eigen::Index nrows, Eigen::Index ncols, const std::string& what)
{
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != nrows) {
        throw FormatError(what + ": expected " + std::to_string(nrows) + " rows");
    }
    MatrixQ m = zero_matrix(nrows, ncols);
    for (Eigen::Index i = 0; i < nrows; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != ncols) {
            throw FormatError(what + ": row " + std::to_string(i) + " must have " + std::to_string(ncols) + " entries");
        }
        for (Eigen::Index k = 0; k < ncols; ++k) {
            m(i, k) = rational_from(row[static_cast<std::size_t>(k)]);
        }
    }
    return m;
}

json matrix_json(const MatrixQ& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(m(i, k).str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

BasisElement element_from(const json& v)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        throw FormatError("basis element must be [degree, index], got " + v.dump());
    }
    return {v[0].get<int>(), v[1].get<int>()};
}

template <class T>
T field(const json& j, const char* key)
{
    if (!j.contains(key)) {
        throw FormatError(std::string("missing field \"") + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("field \"") + key + "\": " + e.what());
    }
}

} // namespace

Dgla dgla_from_json(const json& j)
{
    if (!j.is_object()) {
        throw FormatError("DGLA description must be a JSON object");
    }
    Dgla d;
    try {
        d = Dgla(field<std::vector<int>>(j, "degrees"), field<std::vector<int>>(j, "dims"),
                 j.contains("name") ? field<std::string>(j, "name") : std::string());
        for (const json& e : j.value("differential", json::array())) {
            const int k = field<int>(e, "degree");
            d.set_differential(k, matrix_from(e.at("matrix"), d.dim(k + 1), d.dim(k), "differential"));
        }
        for (const json& e : j.value("inner_product", json::array())) {
            const int k = field<int>(e, "degree");
            d.set_inner_product(k, matrix_from(e.at("matrix"), d.dim(k), d.dim(k), "inner product"));
        }
        for (const json& e : j.value("bracket", json::array())) {
            if (!e.contains("left") || !e.contains("right") || !e.contains("value")) {
                throw FormatError("bracket entry needs left, right, result and value");
            }
            d.add_bracket(element_from(e.at("left")), element_from(e.at("right")), field<int>(e, "result"),
                          rational_from(e.at("value")));
        }
    } catch (const ShapeError& e) {
        throw FormatError(e.what());
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
    return d;
}

json to_json(const Dgla& d)
{
    json j;
    j["name"] = d.name();
    j["degrees"] = d.degrees();
    std::vector<int> dims;
    for (int k : d.degrees()) {
        dims.push_back(d.dim(k));
    }
    j["dims"] = dims;
    json diff = json::array();
    json metric = json::array();
    for (int k : d.degrees()) {
        if (d.has_differential(k)) {
            diff.push_back({{"degree", k}, {"matrix", matrix_json(d.differential(k))}});
        }
        if (d.has_inner_product(k)) {
            metric.push_back({{"degree", k}, {"matrix", matrix_json(d.inner_product(k))}});
        }
    }
    j["differential"] = diff;
    json br = json::array();
    for (const BracketEntry& e : d.bracket_entries()) {
        br.push_back({{"left", {e.left.degree, e.left.index}},
                      {"right", {e.right.degree, e.right.index}},
                      {"result", e.result},
                      {"value", e.c.str()}});
    }
    j["bracket"] = br;
    if (!metric.empty()) {
        j["inner_product"] = metric;
    }
    return j;
}

std::optional<std::vector<VectorQ>> linear_from_json(const json& j, const Dgla& d)
{
    if (!j.contains("linear")) {
        return std::nullopt;
    }
    const MatrixQ rows = matrix_from(j.at("linear"), static_cast<Eigen::Index>(j.at("linear").size()), d.dim(1), "linear");
    std::vector<VectorQ> out;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        out.emplace_back(rows.row(i).transpose());
    }
    return out;
}

Dgla load_dgla(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return dgla_from_json(j);
}

const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names{"abelian", "three_element", "obstructed"};
    return names;
}

Dgla builtin_dgla(const std::string& name)
{
    if (name == "abelian") {
        // bracket 0, d 0
        return Dgla({0, 1, 2}, {1, 2, 1}, name);
    }
    if (name == "three_element") {
        // e_1, e_2 in degree 1, e_3 in degree 2; d e_2 = e_3, [e_1, e_1] = 2 e_3
        Dgla d({1, 2}, {2, 1}, name);
        MatrixQ m = zero_matrix(1, 2);
        m(0, 1) = 1;
        d.set_differential(1, m);
        d.add_bracket({1, 0}, {1, 0}, 0, Rational(2));
        return d;
    }
    if (name == "obstructed") {
        // d = 0, [f_1, f_1] = h_2
        Dgla d({1, 2}, {1, 1}, name);
        d.add_bracket({1, 0}, {1, 0}, 0, Rational(1));
        return d;
    }
    throw FormatError("unknown built-in DGLA \"" + name + "\"");
}

json to_json(const VectorQ& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i).str());
    }
    return a;
}

json to_json(const FormalSeries& s)
{
    json terms = json::array();
    for (const auto& [i, v] : s.coefficients()) {
        terms.push_back({{"index", i}, {"vector", to_json(v)}});
    }
    return {{"params", s.params()},
            {"order", s.order()},
            {"degree", s.degree()},
            {"dim", s.dim()},
            {"zero", s.is_zero()},
            {"terms", terms}};
}

json to_json(const KuranishiSolution& s)
{
    json status = json::array();
    for (OrderStatus o : s.status) {
        status.push_back(to_string(o));
    }
    json j;
    j["requested_order"] = s.requested_order;
    j["solved_order"] = s.solved_order();
    j["status"] = status;
    if (s.obstruction) {
        j["obstruction"] = {{"order", s.obstruction->order},
                            {"index", s.obstruction->index},
                            {"harmonic_component", to_json(s.obstruction->component)}};
    } else {
        j["obstruction"] = nullptr;
    }
    j["phi"] = to_json(s.phi);
    j["gauge_residual"] = to_json(s.gauge_residual);
    j["mc_residual"] = to_json(s.mc_residual);
    return j;
}

json to_json(const ValidationReport& r)
{
    json j;
    j["valid"] = r.valid();
    json failures = json::object();
    for (const auto& [axiom, n] : r.failures) {
        failures[axiom] = n;
    }
    j["failures"] = failures;
    json v = json::array();
    for (const Violation& x : r.violations) {
        json w = json::array();
        for (const auto& e : x.witness) {
            w.push_back({e.degree, e.index});
        }
        v.push_back({{"axiom", x.axiom},
                     {"witness", w},
                     {"component", {x.component.degree, x.component.index}},
                     {"defect", x.defect.str()},
                     {"message", x.describe()}});
    }
    j["violations"] = v;
    if (r.hodge) {
        json dims = json::object();
        for (int k : r.hodge->degrees()) {
            dims[std::to_string(k)] = r.hodge->at(k).harmonic_basis.cols();
        }
        j["harmonic_dims"] = dims;
        j["hodge_identities"] = r.hodge->identities_hold();
    }
    return j;
}

} // namespace fanolab::kuranishi
