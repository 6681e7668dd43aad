#pragma once

#include "fanolab/kuranishi/dgla.hpp"

#include <map>
#include <vector>

namespace fanolab::kuranishi {

/// Exponents of t_1, ..., t_n.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& i);

/// Truncated power series in t_1..t_n with coefficients in one degree of a DGLA.
/// Zero coefficients are not stored.
class FormalSeries {
public:
    FormalSeries(int params, int order, int degree, int dim);

    int params() const noexcept { return params_; }
    int order() const noexcept { return order_; }
    int degree() const noexcept { return degree_; }
    int dim() const noexcept { return dim_; }
    const std::map<MultiIndex, VectorQ>& coefficients() const noexcept { return c_; }

    /// Zero for indices that are absent.
    VectorQ coefficient(const MultiIndex& i) const;
    /// Throws ShapeError for a bad index length, |i| > order, or wrong vector size.
    void set(const MultiIndex& i, const VectorQ& v);
    void add(const MultiIndex& i, const VectorQ& v);

    bool is_zero() const noexcept { return c_.empty(); }
    /// Terms with |i| = k.
    FormalSeries homogeneous(int k) const;
    /// Same coefficients with a new truncation order; terms above it are dropped.
    FormalSeries with_order(int order) const;

    /// sum_i t_i v_i
    static FormalSeries linear(int degree, const std::vector<VectorQ>& v, int order);

    friend bool operator==(const FormalSeries& a, const FormalSeries& b);

private:
    void check(const MultiIndex& i, const VectorQ& v) const;

    int params_;
    int order_;
    int degree_;
    int dim_;
    std::map<MultiIndex, VectorQ> c_;
};

/// All multi-indices in n variables with |i| = k, in lexicographic order.
std::vector<MultiIndex> multi_indices(int n, int k);

FormalSeries operator+(const FormalSeries& a, const FormalSeries& b);
FormalSeries operator-(const FormalSeries& a, const FormalSeries& b);
FormalSeries operator*(const Rational& r, const FormalSeries& a);

/// Coefficientwise bracket with multi-index convolution, truncated at the common order.
FormalSeries bracket(const Dgla& d, const FormalSeries& a, const FormalSeries& b);
/// m applied to every coefficient; m must be (dim of target_degree) x a.dim().
FormalSeries apply(const MatrixQ& m, int target_degree, const FormalSeries& a);
/// d applied to every coefficient.
FormalSeries apply_d(const Dgla& d, const FormalSeries& a);
/// Drop terms with |i| > order (same as with_order for order <= a.order()).
FormalSeries truncate(const FormalSeries& a, int order);

} // namespace fanolab::kuranishi
