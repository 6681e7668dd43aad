#include "fanolab/kuranishi/dgla.hpp"

#include "fanolab/jets/errors.hpp"

#include <algorithm>
#include <sstream>

namespace fanolab::kuranishi {

std::string to_string(const BasisElement& e)
{
    return "e^" + std::to_string(e.degree) + "_" + std::to_string(e.index);
}

int sign_power(int n)
{
    return (n % 2 == 0) ? 1 : -1;
}

Dgla::Dgla(std::vector<int> degrees, std::vector<int> dims, std::string name)
    : name_(std::move(name)), degrees_(std::move(degrees))
{
    if (degrees_.size() != dims.size()) {
        throw ShapeError("degrees and dims differ in length");
    }
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
        if (i > 0 && degrees_[i] <= degrees_[i - 1]) {
            throw ShapeError("degrees must be strictly increasing");
        }
        if (dims[i] < 0) {
            throw ShapeError("negative dimension in degree " + std::to_string(degrees_[i]));
        }
        dims_[degrees_[i]] = dims[i];
    }
}

int Dgla::dim(int degree) const
{
    const auto it = dims_.find(degree);
    return it == dims_.end() ? 0 : it->second;
}

void Dgla::set_differential(int degree, MatrixQ d)
{
    if (d.rows() != dim(degree + 1) || d.cols() != dim(degree)) {
        std::ostringstream os;
        os << "differential from degree " << degree << " must be " << dim(degree + 1) << " x " << dim(degree)
           << ", got " << d.rows() << " x " << d.cols();
        throw ShapeError(os.str());
    }
    d_[degree] = std::move(d);
}

void Dgla::set_inner_product(int degree, MatrixQ m)
{
    if (m.rows() != dim(degree) || m.cols() != dim(degree)) {
        throw ShapeError("inner product in degree " + std::to_string(degree) + " has the wrong size");
    }
    metric_[degree] = std::move(m);
}

void Dgla::check_element(const BasisElement& e) const
{
    if (e.index < 0 || e.index >= dim(e.degree)) {
        throw ShapeError("no basis element " + to_string(e));
    }
}

void Dgla::add_bracket(BasisElement left, BasisElement right, int k, const Rational& c)
{
    check_element(left);
    check_element(right);
    check_element({left.degree + right.degree, k});
    Rational& slot = brackets_[{left.degree, right.degree}][{left.index, right.index, k}];
    slot += c;
}

MatrixQ Dgla::differential(int degree) const
{
    const auto it = d_.find(degree);
    return it == d_.end() ? zero_matrix(dim(degree + 1), dim(degree)) : it->second;
}

MatrixQ Dgla::inner_product(int degree) const
{
    const auto it = metric_.find(degree);
    return it == metric_.end() ? identity_matrix(dim(degree)) : it->second;
}

std::vector<BracketEntry> Dgla::bracket_entries() const
{
    std::vector<BracketEntry> out;
    for (const auto& [pq, table] : brackets_) {
        for (const auto& [ijk, c] : table) {
            if (!c.is_zero()) {
                out.push_back({{pq.first, std::get<0>(ijk)}, {pq.second, std::get<1>(ijk)}, std::get<2>(ijk), c});
            }
        }
    }
    return out;
}

VectorQ Dgla::apply_d(int degree, const VectorQ& x) const
{
    if (x.size() != dim(degree)) {
        throw ShapeError("vector does not live in degree " + std::to_string(degree));
    }
    return differential(degree) * x;
}

VectorQ Dgla::bracket(int p, const VectorQ& x, int q, const VectorQ& y) const
{
    if (x.size() != dim(p) || y.size() != dim(q)) {
        throw ShapeError("bracket operands have the wrong dimension");
    }
    VectorQ out = zero_vector(dim(p + q));
    const auto it = brackets_.find({p, q});
    if (it == brackets_.end()) {
        return out;
    }
    for (const auto& [ijk, c] : it->second) {
        const auto [i, j, k] = ijk;
        if (!x(i).is_zero() && !y(j).is_zero()) {
            out(k) += c * x(i) * y(j);
        }
    }
    return out;
}

VectorQ Dgla::basis_vector(const BasisElement& e) const
{
    check_element(e);
    VectorQ v = zero_vector(dim(e.degree));
    v(e.index) = 1;
    return v;
}

// ---- Hodge theory ----

HodgeData::HodgeData(const Dgla& d)
{
    for (int k : d.degrees()) {
        HodgeDegree h;
        h.degree = k;
        const MatrixQ m = d.inner_product(k);
        const MatrixQ minv = inverse(m);
        // d^* from degree k to k-1 and from k+1 to k
        h.codifferential = inverse(d.inner_product(k - 1)) * d.differential(k - 1).transpose() * m;
        const MatrixQ up = minv * d.differential(k).transpose() * d.inner_product(k + 1);
        h.laplacian = d.differential(k - 1) * h.codifferential + up * d.differential(k);
        h.harmonic_basis = null_space(h.laplacian);
        const MatrixQ& kb = h.harmonic_basis;
        if (kb.cols() > 0) {
            h.harmonic = kb * inverse(MatrixQ(kb.transpose() * m * kb)) * kb.transpose() * m;
        } else {
            h.harmonic = zero_matrix(d.dim(k), d.dim(k));
        }
        h.green = inverse(MatrixQ(h.laplacian + h.harmonic)) - h.harmonic;
        degrees_.emplace(k, std::move(h));
    }
}

const HodgeDegree& HodgeData::at(int degree) const
{
    const auto it = degrees_.find(degree);
    if (it == degrees_.end()) {
        throw ShapeError("no Hodge data in degree " + std::to_string(degree));
    }
    return it->second;
}

std::vector<int> HodgeData::degrees() const
{
    std::vector<int> out;
    for (const auto& entry : degrees_) {
        out.push_back(entry.first);
    }
    return out;
}

bool HodgeData::identities_hold() const
{
    for (const auto& [k, h] : degrees_) {
        const MatrixQ id = identity_matrix(h.laplacian.rows());
        const MatrixQ p = id - h.harmonic;
        if (!is_zero(MatrixQ(h.laplacian * h.green - p)) || !is_zero(MatrixQ(h.green * h.laplacian - p)) ||
            !is_zero(MatrixQ(h.harmonic * h.harmonic - h.harmonic)) || !is_zero(MatrixQ(h.green * h.harmonic)) ||
            !is_zero(MatrixQ(h.harmonic * h.green))) {
            return false;
        }
    }
    return true;
}

// ---- validation ----

std::string Violation::describe() const
{
    std::ostringstream os;
    os << axiom << " fails on (";
    for (std::size_t i = 0; i < witness.size(); ++i) {
        os << (i ? ", " : "") << to_string(witness[i]);
    }
    os << "): component " << to_string(component) << " of the defect is " << defect.str();
    return os.str();
}

void ValidationReport::require_valid() const
{
    if (!valid()) {
        throw AxiomError(violations.front().describe(), violations.front().axiom);
    }
}

namespace {

class Recorder {
public:
    Recorder(ValidationReport& r, int cap) : r_(r), cap_(cap) {}

    /// Records a violation if defect (in degree `degree`) is nonzero.
    void check(const std::string& axiom, std::vector<BasisElement> witness, int degree, const VectorQ& defect)
    {
        for (Eigen::Index i = 0; i < defect.size(); ++i) {
            if (!defect(i).is_zero()) {
                int& n = r_.failures[axiom];
                if (n++ < cap_) {
                    r_.violations.push_back({axiom, std::move(witness), {degree, static_cast<int>(i)}, defect(i)});
                }
                return;
            }
        }
    }

private:
    ValidationReport& r_;
    int cap_;
};

std::vector<BasisElement> basis(const Dgla& d)
{
    std::vector<BasisElement> out;
    for (int k : d.degrees()) {
        for (int i = 0; i < d.dim(k); ++i) {
            out.push_back({k, i});
        }
    }
    return out;
}

} // namespace

ValidationReport dgla_validate(const Dgla& d, int max_listed_per_axiom)
{
    ValidationReport r;
    Recorder rec(r, max_listed_per_axiom);

    for (int k : d.degrees()) {
        const MatrixQ m = d.inner_product(k);
        if (!is_symmetric_positive_definite(m)) {
            int& n = r.failures["inner product"];
            if (n++ < max_listed_per_axiom) {
                r.violations.push_back({"inner product", {}, {k, 0}, Rational(0)});
            }
        }
        const MatrixQ dd = d.differential(k + 1) * d.differential(k);
        for (int i = 0; i < d.dim(k); ++i) {
            rec.check("d o d = 0", {{k, i}}, k + 2, dd.col(i));
        }
    }

    const std::vector<BasisElement> all = basis(d);
    auto br = [&](const BasisElement& x, const BasisElement& y) {
        return d.bracket(x.degree, d.basis_vector(x), y.degree, d.basis_vector(y));
    };
    for (const auto& x : all) {
        for (const auto& y : all) {
            const int p = x.degree;
            const int q = y.degree;
            // [x,y] + (-1)^{pq} [y,x] = 0
            rec.check("graded antisymmetry", {x, y}, p + q, br(x, y) + Rational(sign_power(p * q)) * br(y, x));
            // d[x,y] - [dx,y] - (-1)^p [x,dy] = 0
            const VectorQ lhs = d.apply_d(p + q, br(x, y));
            const VectorQ dx = d.apply_d(p, d.basis_vector(x));
            const VectorQ dy = d.apply_d(q, d.basis_vector(y));
            const VectorQ rhs = d.bracket(p + 1, dx, q, d.basis_vector(y)) +
                                Rational(sign_power(p)) * d.bracket(p, d.basis_vector(x), q + 1, dy);
            rec.check("graded Leibniz", {x, y}, p + q + 1, lhs - rhs);
        }
    }
    for (const auto& x : all) {
        for (const auto& y : all) {
            for (const auto& z : all) {
                const int p = x.degree;
                const int q = y.degree;
                const int s = z.degree;
                // [x,[y,z]] = [[x,y],z] + (-1)^{pq} [y,[x,z]]
                const VectorQ ex = d.basis_vector(x);
                const VectorQ ey = d.basis_vector(y);
                const VectorQ ez = d.basis_vector(z);
                const VectorQ lhs = d.bracket(p, ex, q + s, d.bracket(q, ey, s, ez));
                const VectorQ rhs = d.bracket(p + q, d.bracket(p, ex, q, ey), s, ez) +
                                    Rational(sign_power(p * q)) * d.bracket(q, ey, p + s, d.bracket(p, ex, s, ez));
                rec.check("graded Jacobi", {x, y, z}, p + q + s, lhs - rhs);
            }
        }
    }
    if (r.valid()) {
        r.hodge.emplace(d);
    }
    return r;
}

} // namespace fanolab::kuranishi
