#pragma once

#include "fanolab/jets/errors.hpp"
#include "fanolab/jets/layout.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace fanolab {

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class Scalar>
Scalar conj_scalar(const Scalar& s)
{
    if constexpr (is_complex<Scalar>::value) {
        return std::conj(s);
    } else {
        return s;
    }
}

template <class Scalar>
bool scalar_is_real(const Scalar& s)
{
    if constexpr (is_complex<Scalar>::value) {
        return s.imag() == 0;
    } else {
        return true;
    }
}

} // namespace detail

/// Truncated Taylor polynomial in z^1..z^m, zbar^1..zbar^m and an optional parameter t.
///
/// Coefficients are dense: for each power of t there is one block of
/// count(order) monomial coefficients in graded order. Operands of binary
/// operations must agree in m, order and t_order; use truncated() to lower
/// an operand explicitly.
template <class Scalar>
class BasicJet {
public:
    using scalar_type = Scalar;

    BasicJet() = default;
    BasicJet(int m, int order, int t_order = 0) : layout_(&detail::MonomialLayout::get(m)), order_(order), t_order_(t_order)
    {
        if (order < 0 || order > kMaxJetOrder) {
            throw ShapeError("jet order must lie in [0, " + std::to_string(kMaxJetOrder) + "]");
        }
        if (t_order < 0) {
            throw ShapeError("t_order must be nonnegative");
        }
        c_.assign(static_cast<std::size_t>(block() * (t_order + 1)), Scalar(0));
        real_ = true;
    }

    static BasicJet constant(int m, int order, Scalar value, int t_order = 0)
    {
        BasicJet j(m, order, t_order);
        j.c_[0] = value;
        j.real_ = detail::scalar_is_real(value);
        return j;
    }

    /// The coordinate function z^i, zbar^i or t.
    static BasicJet variable(int m, int order, Var v, int t_order = 0)
    {
        BasicJet j(m, order, t_order);
        if (v.kind == Var::Kind::t) {
            if (t_order < 1) {
                throw DegreeError("t variable needs t_order >= 1");
            }
            j.c_[static_cast<std::size_t>(j.block())] = Scalar(1);
            return j;
        }
        if (v.index < 0 || v.index >= m) {
            throw ShapeError("variable index out of range");
        }
        if (order >= 1) {
            std::vector<int> e(static_cast<std::size_t>(2 * m), 0);
            e[static_cast<std::size_t>(v.kind == Var::Kind::z ? v.index : m + v.index)] = 1;
            j.c_[static_cast<std::size_t>(j.layout_->index(e))] = Scalar(1);
        }
        j.real_ = false;
        return j;
    }

    bool empty() const noexcept { return layout_ == nullptr; }
    int dim() const noexcept { return layout_ ? layout_->dim() : 0; }
    int order() const noexcept { return order_; }
    int t_order() const noexcept { return t_order_; }
    /// Real flag: set when the jet is known to equal its conjugate.
    bool is_real() const noexcept { return real_; }
    void set_real(bool r) noexcept { real_ = r; }
    const detail::MonomialLayout& layout() const { return *layout_; }

    /// Number of monomial coefficients per power of t.
    int block() const { return layout_->count(order_); }
    std::size_t size() const noexcept { return c_.size(); }

    Scalar value() const { return c_.empty() ? Scalar(0) : c_[0]; }

    Scalar& raw(int idx, int tdeg = 0) { return c_[static_cast<std::size_t>(tdeg * block() + idx)]; }
    const Scalar& raw(int idx, int tdeg = 0) const { return c_[static_cast<std::size_t>(tdeg * block() + idx)]; }
    std::span<const Scalar> coefficients() const { return c_; }

    /// Coefficient of the monomial with exponents (z^1..z^m, zbar^1..zbar^m) and t^tdeg.
    Scalar coeff(std::span<const int> exps, int tdeg = 0) const
    {
        const int k = layout_->index(exps);
        if (k < 0 || k >= block() || tdeg < 0 || tdeg > t_order_) {
            return Scalar(0);
        }
        return raw(k, tdeg);
    }
    Scalar coeff(std::initializer_list<int> exps, int tdeg = 0) const
    {
        return coeff(std::span<const int>(exps.begin(), exps.size()), tdeg);
    }

    void set_coeff(std::span<const int> exps, Scalar v, int tdeg = 0)
    {
        const int k = layout_->index(exps);
        if (k < 0 || k >= block() || tdeg < 0 || tdeg > t_order_) {
            throw ShapeError("monomial outside the jet truncation");
        }
        raw(k, tdeg) = v;
        real_ = false;
    }
    void set_coeff(std::initializer_list<int> exps, Scalar v, int tdeg = 0)
    {
        set_coeff(std::span<const int>(exps.begin(), exps.size()), v, tdeg);
    }

    /// The t^k slice as a jet with t_order 0.
    BasicJet t_coeff(int k) const
    {
        BasicJet r(dim(), order_, 0);
        if (k >= 0 && k <= t_order_) {
            std::copy_n(c_.begin() + k * block(), block(), r.c_.begin());
        }
        r.real_ = real_;
        return r;
    }

    /// Same series truncated to a lower (or equal) order.
    BasicJet truncated(int order, int t_order) const
    {
        if (order > order_ || t_order > t_order_) {
            throw DegreeError("cannot raise the truncation order of a jet");
        }
        BasicJet r(dim(), order, t_order);
        const int nb = r.block();
        for (int k = 0; k <= t_order; ++k) {
            std::copy_n(c_.begin() + k * block(), nb, r.c_.begin() + k * nb);
        }
        r.real_ = real_;
        return r;
    }
    BasicJet truncated(int order) const { return truncated(order, t_order_); }

    /// Same series viewed at a higher order (new coefficients zero). Only
    /// meaningful when the jet is known to be exact, e.g. a polynomial.
    BasicJet padded(int order, int t_order) const
    {
        if (order < order_ || t_order < t_order_) {
            throw DegreeError("padded() cannot lower the truncation order");
        }
        BasicJet r(dim(), order, t_order);
        const int nb = r.block();
        for (int k = 0; k <= t_order_; ++k) {
            std::copy_n(c_.begin() + k * block(), block(), r.c_.begin() + k * nb);
        }
        r.real_ = real_;
        return r;
    }

    /// Largest absolute coefficient.
    double max_abs() const
    {
        double r = 0;
        for (const auto& v : c_) {
            r = std::max(r, static_cast<double>(std::abs(v)));
        }
        return r;
    }

    // ---- arithmetic -------------------------------------------------------

    BasicJet& operator+=(const BasicJet& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) {
            c_[k] += o.c_[k];
        }
        real_ = real_ && o.real_;
        return *this;
    }
    BasicJet& operator-=(const BasicJet& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) {
            c_[k] -= o.c_[k];
        }
        real_ = real_ && o.real_;
        return *this;
    }
    BasicJet& operator*=(const Scalar& s)
    {
        for (auto& v : c_) {
            v *= s;
        }
        real_ = real_ && detail::scalar_is_real(s);
        return *this;
    }
    BasicJet& operator+=(const Scalar& s)
    {
        c_[0] += s;
        real_ = real_ && detail::scalar_is_real(s);
        return *this;
    }
    BasicJet& operator-=(const Scalar& s) { return *this += -s; }
    BasicJet& operator*=(const BasicJet& o) { return *this = *this * o; }
    BasicJet& operator/=(const BasicJet& o) { return *this = *this / o; }
    BasicJet& operator/=(const Scalar& s) { return *this *= Scalar(1) / s; }

    friend BasicJet operator+(BasicJet a, const BasicJet& b) { return a += b; }
    friend BasicJet operator-(BasicJet a, const BasicJet& b) { return a -= b; }
    friend BasicJet operator-(BasicJet a)
    {
        for (auto& v : a.c_) {
            v = -v;
        }
        return a;
    }
    friend BasicJet operator+(BasicJet a, const Scalar& s) { return a += s; }
    friend BasicJet operator+(const Scalar& s, BasicJet a) { return a += s; }
    friend BasicJet operator-(BasicJet a, const Scalar& s) { return a -= s; }
    friend BasicJet operator-(const Scalar& s, BasicJet a) { return (-a) += s; }
    friend BasicJet operator*(BasicJet a, const Scalar& s) { return a *= s; }
    friend BasicJet operator*(const Scalar& s, BasicJet a) { return a *= s; }
    friend BasicJet operator/(BasicJet a, const Scalar& s) { return a /= s; }
    friend BasicJet operator/(const Scalar& s, const BasicJet& a) { return inverse(a) * s; }

    friend BasicJet operator*(const BasicJet& a, const BasicJet& b)
    {
        a.check_same(b);
        BasicJet r(a.dim(), a.order_, a.t_order_);
        const int nb = a.block();
        const auto table = a.layout_->mul_table(a.order_);
        for (int ta = 0; ta <= a.t_order_; ++ta) {
            const Scalar* pa = a.c_.data() + ta * nb;
            for (int tb = 0; ta + tb <= a.t_order_; ++tb) {
                const Scalar* pb = b.c_.data() + tb * nb;
                Scalar* pr = r.c_.data() + (ta + tb) * nb;
                for (const auto& m : table) {
                    pr[m.out] += pa[m.a] * pb[m.b];
                }
            }
        }
        r.real_ = a.real_ && b.real_;
        return r;
    }

    friend BasicJet operator/(const BasicJet& a, const BasicJet& b) { return a * inverse(b); }

    /// Multiplicative inverse; the constant term must be nonzero.
    friend BasicJet inverse(const BasicJet& a)
    {
        const Scalar a0 = a.value();
        if (a0 == Scalar(0)) {
            throw SingularError("jet inverse: constant term is zero");
        }
        // 1/a = (1/a0) * sum (-u)^k with u = a/a0 - 1 nilpotent.
        const BasicJet u = a * (Scalar(1) / a0) - Scalar(1);
        BasicJet r = constant(a.dim(), a.order_, Scalar(1), a.t_order_);
        BasicJet p = r;
        for (int k = 1; k <= a.order_ + a.t_order_; ++k) {
            p = p * u;
            if (k % 2) {
                r -= p;
            } else {
                r += p;
            }
        }
        r *= Scalar(1) / a0;
        r.real_ = a.real_;
        return r;
    }

    /// Principal logarithm; the constant term must be nonzero.
    friend BasicJet log(const BasicJet& a)
    {
        const Scalar a0 = a.value();
        if (a0 == Scalar(0)) {
            throw SingularError("jet log: constant term is zero");
        }
        using std::log;
        const BasicJet u = a * (Scalar(1) / a0) - Scalar(1);
        BasicJet r(a.dim(), a.order_, a.t_order_);
        BasicJet p = constant(a.dim(), a.order_, Scalar(1), a.t_order_);
        for (int k = 1; k <= a.order_ + a.t_order_; ++k) {
            p = p * u;
            const Scalar w = Scalar(1) / Scalar(static_cast<double>(k));
            if (k % 2) {
                r += p * w;
            } else {
                r -= p * w;
            }
        }
        r += log(a0);
        r.real_ = a.real_ && detail::scalar_is_real(a0) && std::real(a0) > 0;
        return r;
    }

    friend BasicJet exp(const BasicJet& a)
    {
        using std::exp;
        BasicJet u = a;
        const Scalar a0 = a.value();
        u.c_[0] = Scalar(0);
        BasicJet r = constant(a.dim(), a.order_, Scalar(1), a.t_order_);
        BasicJet p = r;
        for (int k = 1; k <= a.order_ + a.t_order_; ++k) {
            p = p * u * (Scalar(1) / Scalar(static_cast<double>(k)));
            r += p;
        }
        r *= exp(a0);
        r.real_ = a.real_;
        return r;
    }

    /// Integer power, negative exponents via inverse.
    friend BasicJet pow(const BasicJet& a, int n)
    {
        if (n < 0) {
            return pow(inverse(a), -n);
        }
        BasicJet r = constant(a.dim(), a.order_, Scalar(1), a.t_order_);
        BasicJet base = a;
        while (n) {
            if (n & 1) {
                r = r * base;
            }
            n >>= 1;
            if (n) {
                base = base * base;
            }
        }
        return r;
    }

    /// Complex conjugate as a function: swaps z and zbar exponents and conjugates coefficients.
    friend BasicJet conj(const BasicJet& a)
    {
        BasicJet r(a.dim(), a.order_, a.t_order_);
        const int nb = a.block();
        for (int t = 0; t <= a.t_order_; ++t) {
            for (int k = 0; k < nb; ++k) {
                r.c_[static_cast<std::size_t>(t * nb + a.layout_->swapped(k))] =
                    detail::conj_scalar(a.c_[static_cast<std::size_t>(t * nb + k)]);
            }
        }
        r.real_ = a.real_;
        return r;
    }

    /// Formal partial derivative; order (or t_order for t) drops by one.
    friend BasicJet partial(const BasicJet& a, Var v)
    {
        if (v.kind == Var::Kind::t) {
            if (a.t_order_ < 1) {
                throw DegreeError("partial in t needs t_order >= 1");
            }
            BasicJet r(a.dim(), a.order_, a.t_order_ - 1);
            const int nb = a.block();
            for (int t = 0; t < a.t_order_; ++t) {
                for (int k = 0; k < nb; ++k) {
                    r.c_[static_cast<std::size_t>(t * nb + k)] =
                        Scalar(static_cast<double>(t + 1)) * a.c_[static_cast<std::size_t>((t + 1) * nb + k)];
                }
            }
            r.real_ = a.real_;
            return r;
        }
        if (a.order_ < 1) {
            throw DegreeError("partial derivative of an order-0 jet");
        }
        if (v.index < 0 || v.index >= a.dim()) {
            throw ShapeError("variable index out of range");
        }
        const int var = v.kind == Var::Kind::z ? v.index : a.dim() + v.index;
        BasicJet r(a.dim(), a.order_ - 1, a.t_order_);
        const int nb = a.block();
        const int nr = r.block();
        for (int t = 0; t <= a.t_order_; ++t) {
            for (int k = 0; k < nr; ++k) {
                const int src = a.layout_->raise(var, k);
                const int e = a.layout_->exponents(k)[static_cast<std::size_t>(var)] + 1;
                r.c_[static_cast<std::size_t>(t * nr + k)] =
                    Scalar(static_cast<double>(e)) * a.c_[static_cast<std::size_t>(t * nb + src)];
            }
        }
        r.real_ = false;
        return r;
    }

    /// Exact coefficient equality (shape included).
    friend bool operator==(const BasicJet& a, const BasicJet& b)
    {
        return a.layout_ == b.layout_ && a.order_ == b.order_ && a.t_order_ == b.t_order_ && a.c_ == b.c_;
    }

    void check_same(const BasicJet& o) const
    {
        if (layout_ == nullptr || o.layout_ == nullptr) {
            throw ShapeError("operation on an empty jet");
        }
        if (layout_ != o.layout_ || order_ != o.order_ || t_order_ != o.t_order_) {
            throw ShapeError("jet shapes differ: (m, order, t_order) = (" + std::to_string(dim()) + ", " +
                             std::to_string(order_) + ", " + std::to_string(t_order_) + ") vs (" +
                             std::to_string(o.dim()) + ", " + std::to_string(o.order_) + ", " +
                             std::to_string(o.t_order_) + ")");
        }
    }

private:
    const detail::MonomialLayout* layout_ = nullptr;
    int order_ = 0;
    int t_order_ = 0;
    bool real_ = false;
    std::vector<Scalar> c_;
};

using Jet = BasicJet<std::complex<double>>;

/// (a + conj(a)) / 2, flagged real.
template <class Scalar>
BasicJet<Scalar> real_part(const BasicJet<Scalar>& a)
{
    BasicJet<Scalar> r = (a + conj(a)) * Scalar(0.5);
    r.set_real(true);
    return r;
}

/// Largest |coeff - conj(coeff of swapped monomial)|; zero for a real function.
template <class Scalar>
double reality_defect(const BasicJet<Scalar>& a)
{
    return (a - conj(a)).max_abs();
}

/// Product truncated to the lower of the two orders.
template <class Scalar>
BasicJet<Scalar> tmul(const BasicJet<Scalar>& a, const BasicJet<Scalar>& b)
{
    const int o = std::min(a.order(), b.order());
    const int t = std::min(a.t_order(), b.t_order());
    return a.truncated(o, t) * b.truncated(o, t);
}

/// Truncates to the lower order then adds.
template <class Scalar>
BasicJet<Scalar> tadd(const BasicJet<Scalar>& a, const BasicJet<Scalar>& b)
{
    const int o = std::min(a.order(), b.order());
    const int t = std::min(a.t_order(), b.t_order());
    return a.truncated(o, t) + b.truncated(o, t);
}

/// Maximum coefficient difference between two same-shape jets.
template <class Scalar>
double max_abs_diff(const BasicJet<Scalar>& a, const BasicJet<Scalar>& b)
{
    return (a - b).max_abs();
}

template <class Scalar>
BasicJet<Scalar> dz(const BasicJet<Scalar>& a, int i)
{
    return partial(a, z(i));
}
template <class Scalar>
BasicJet<Scalar> dzbar(const BasicJet<Scalar>& a, int i)
{
    return partial(a, zbar(i));
}

} // namespace fanolab
