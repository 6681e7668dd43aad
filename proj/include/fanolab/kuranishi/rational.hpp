#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <utility>

namespace fanolab::kuranishi {

/// Exact rational scalar for Eigen matrices, backed by boost::multiprecision::cpp_rational.
///
/// cpp_rational cannot be used as an Eigen scalar directly with Boost 1.74 and Eigen 3.4
/// (the byte-container constructor check trips on Eigen's iterator typedefs).
class Rational {
public:
    using value_type = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(int n) : v_(n) {}
    Rational(long long n) : v_(n) {}
    Rational(long long n, long long d) : v_(n, d) {}
    explicit Rational(value_type v) : v_(std::move(v)) {}

    /// "p/q", "p" or "-p/q"; throws std::invalid_argument.
    static Rational parse(const std::string& s);
    std::string str() const;

    const value_type& value() const noexcept { return v_; }
    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(value_type(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
    value_type v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);
Rational abs(const Rational& r);
double to_double(const Rational& r);

using MatrixQ = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

template <class Derived>
bool is_zero(const Eigen::MatrixBase<Derived>& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!m(i, j).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

MatrixQ zero_matrix(Eigen::Index rows, Eigen::Index cols);
VectorQ zero_vector(Eigen::Index n);
MatrixQ identity_matrix(Eigen::Index n);

/// Exact inverse by Gauss-Jordan; throws SingularError.
MatrixQ inverse(const MatrixQ& a);

/// Columns spanning the null space, in reduced-echelon form (deterministic).
MatrixQ null_space(const MatrixQ& a);

/// Exact positive-definiteness of a symmetric matrix via LDL^T pivots.
bool is_symmetric_positive_definite(const MatrixQ& a);

} // namespace fanolab::kuranishi

namespace Eigen {

template <>
struct NumTraits<fanolab::kuranishi::Rational> : GenericNumTraits<fanolab::kuranishi::Rational> {
    using Real = fanolab::kuranishi::Rational;
    using NonInteger = fanolab::kuranishi::Rational;
    using Literal = fanolab::kuranishi::Rational;
    using Nested = fanolab::kuranishi::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 40,
        MulCost = 80
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

} // namespace Eigen
