#include "fanolab/kuranishi/rational.hpp"

#include "fanolab/jets/errors.hpp"

#include <ostream>
#include <regex>
#include <stdexcept>

namespace fanolab::kuranishi {

Rational Rational::parse(const std::string& s)
{
    static const std::regex form(R"(\s*([+-]?[0-9]+)(?:\s*/\s*([0-9]+))?\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, form)) {
        throw std::invalid_argument("not a rational: \"" + s + "\"");
    }
    using boost::multiprecision::cpp_int;
    const cpp_int num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
    const cpp_int den(m[2].matched ? m[2].str() : std::string("1"));
    if (den == 0) {
        throw std::invalid_argument("zero denominator: \"" + s + "\"");
    }
    return Rational(value_type(num, den));
}

std::string Rational::str() const
{
    return v_.str();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.v_.is_zero()) {
        throw SingularError("rational division by zero");
    }
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
    return os << r.str();
}

Rational abs(const Rational& r)
{
    return r.sign() < 0 ? -r : r;
}

double to_double(const Rational& r)
{
    return r.value().convert_to<double>();
}

MatrixQ zero_matrix(Eigen::Index rows, Eigen::Index cols)
{
    return MatrixQ::Constant(rows, cols, Rational(0));
}

VectorQ zero_vector(Eigen::Index n)
{
    return VectorQ::Constant(n, Rational(0));
}

MatrixQ identity_matrix(Eigen::Index n)
{
    MatrixQ m = zero_matrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

namespace {

/// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> rref(MatrixQ& a)
{
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index p = row;
        while (p < a.rows() && a(p, col).is_zero()) {
            ++p;
        }
        if (p == a.rows()) {
            continue;
        }
        a.row(p).swap(a.row(row));
        const Rational inv = Rational(1) / a(row, col);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            a(row, j) *= inv;
        }
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != row && !a(i, col).is_zero()) {
                const Rational f = a(i, col);
                for (Eigen::Index j = 0; j < a.cols(); ++j) {
                    a(i, j) -= f * a(row, j);
                }
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

MatrixQ inverse(const MatrixQ& a)
{
    if (a.rows() != a.cols()) {
        throw ShapeError("inverse of a non-square matrix");
    }
    const Eigen::Index n = a.rows();
    MatrixQ aug(n, 2 * n);
    aug << a, identity_matrix(n);
    const auto pivots = rref(aug);
    if (static_cast<Eigen::Index>(pivots.size()) < n || (n > 0 && pivots.back() >= n)) {
        throw SingularError("exact inverse of a singular matrix");
    }
    return aug.rightCols(n);
}

MatrixQ null_space(const MatrixQ& a)
{
    MatrixQ r = a;
    const auto pivots = rref(r);
    std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
    for (auto p : pivots) {
        is_pivot[static_cast<std::size_t>(p)] = true;
    }
    const Eigen::Index nfree = a.cols() - static_cast<Eigen::Index>(pivots.size());
    MatrixQ k = zero_matrix(a.cols(), nfree);
    Eigen::Index c = 0;
    for (Eigen::Index f = 0; f < a.cols(); ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) {
            continue;
        }
        k(f, c) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            k(pivots[i], c) = -r(static_cast<Eigen::Index>(i), f);
        }
        ++c;
    }
    return k;
}

bool is_symmetric_positive_definite(const MatrixQ& a)
{
    if (a.rows() != a.cols() || !is_zero(MatrixQ(a - a.transpose()))) {
        return false;
    }
    MatrixQ m = a;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        if (m(k, k) <= Rational(0)) {
            return false;
        }
        for (Eigen::Index i = k + 1; i < m.rows(); ++i) {
            const Rational f = m(i, k) / m(k, k);
            for (Eigen::Index j = k; j < m.cols(); ++j) {
                m(i, j) -= f * m(k, j);
            }
        }
    }
    return true;
}

} // namespace fanolab::kuranishi
