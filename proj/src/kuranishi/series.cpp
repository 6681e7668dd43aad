#include "fanolab/kuranishi/series.hpp"

#include "fanolab/jets/errors.hpp"

#include <numeric>

namespace fanolab::kuranishi {

int total_degree(const MultiIndex& i)
{
    return std::accumulate(i.begin(), i.end(), 0);
}

FormalSeries::FormalSeries(int params, int order, int degree, int dim)
    : params_(params), order_(order), degree_(degree), dim_(dim)
{
    if (params < 0 || order < 0 || dim < 0) {
        throw ShapeError("formal series needs params, order, dim >= 0");
    }
}

void FormalSeries::check(const MultiIndex& i, const VectorQ& v) const
{
    if (static_cast<int>(i.size()) != params_) {
        throw ShapeError("multi-index has " + std::to_string(i.size()) + " entries, series has " +
                         std::to_string(params_) + " parameters");
    }
    for (int e : i) {
        if (e < 0) {
            throw ShapeError("negative exponent in multi-index");
        }
    }
    if (total_degree(i) > order_) {
        throw ShapeError("multi-index of degree " + std::to_string(total_degree(i)) + " beyond truncation order " +
                         std::to_string(order_));
    }
    if (v.size() != dim_) {
        throw ShapeError("coefficient has dimension " + std::to_string(v.size()) + ", expected " + std::to_string(dim_));
    }
}

VectorQ FormalSeries::coefficient(const MultiIndex& i) const
{
    const auto it = c_.find(i);
    return it == c_.end() ? zero_vector(dim_) : it->second;
}

void FormalSeries::set(const MultiIndex& i, const VectorQ& v)
{
    check(i, v);
    if (kuranishi::is_zero(v)) {
        c_.erase(i);
    } else {
        c_[i] = v;
    }
}

void FormalSeries::add(const MultiIndex& i, const VectorQ& v)
{
    check(i, v);
    const auto it = c_.find(i);
    set(i, it == c_.end() ? v : VectorQ(it->second + v));
}

FormalSeries FormalSeries::homogeneous(int k) const
{
    FormalSeries out(params_, order_, degree_, dim_);
    for (const auto& [i, v] : c_) {
        if (total_degree(i) == k) {
            out.c_.emplace(i, v);
        }
    }
    return out;
}

FormalSeries FormalSeries::with_order(int order) const
{
    FormalSeries out(params_, order, degree_, dim_);
    for (const auto& [i, v] : c_) {
        if (total_degree(i) <= order) {
            out.c_.emplace(i, v);
        }
    }
    return out;
}

FormalSeries FormalSeries::linear(int degree, const std::vector<VectorQ>& v, int order)
{
    if (v.empty()) {
        throw ShapeError("linear series needs at least one coefficient");
    }
    FormalSeries out(static_cast<int>(v.size()), order, degree, static_cast<int>(v.front().size()));
    if (order < 1) {
        return out;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        MultiIndex i(v.size(), 0);
        i[k] = 1;
        out.add(i, v[k]);
    }
    return out;
}

bool operator==(const FormalSeries& a, const FormalSeries& b)
{
    return a.params_ == b.params_ && a.order_ == b.order_ && a.degree_ == b.degree_ && a.dim_ == b.dim_ &&
           a.c_ == b.c_;
}

std::vector<MultiIndex> multi_indices(int n, int k)
{
    std::vector<MultiIndex> out;
    if (n == 0) {
        if (k == 0) {
            out.emplace_back();
        }
        return out;
    }
    MultiIndex cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == n - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[static_cast<std::size_t>(pos)] = e;
            self(self, pos + 1, left - e);
        }
    };
    rec(rec, 0, k);
    return out;
}

namespace {

void require_compatible(const FormalSeries& a, const FormalSeries& b, bool same_degree)
{
    if (a.params() != b.params() || a.order() != b.order()) {
        throw ShapeError("series differ in parameter count or truncation order");
    }
    if (same_degree && (a.degree() != b.degree() || a.dim() != b.dim())) {
        throw ShapeError("series live in different degrees");
    }
}

} // namespace

FormalSeries operator+(const FormalSeries& a, const FormalSeries& b)
{
    require_compatible(a, b, true);
    FormalSeries out = a;
    for (const auto& [i, v] : b.coefficients()) {
        out.add(i, v);
    }
    return out;
}

FormalSeries operator-(const FormalSeries& a, const FormalSeries& b)
{
    return a + Rational(-1) * b;
}

FormalSeries operator*(const Rational& r, const FormalSeries& a)
{
    FormalSeries out(a.params(), a.order(), a.degree(), a.dim());
    for (const auto& [i, v] : a.coefficients()) {
        out.set(i, r * v);
    }
    return out;
}

FormalSeries bracket(const Dgla& d, const FormalSeries& a, const FormalSeries& b)
{
    require_compatible(a, b, false);
    FormalSeries out(a.params(), a.order(), a.degree() + b.degree(), d.dim(a.degree() + b.degree()));
    MultiIndex sum(static_cast<std::size_t>(a.params()));
    for (const auto& [i, x] : a.coefficients()) {
        for (const auto& [j, y] : b.coefficients()) {
            if (total_degree(i) + total_degree(j) > a.order()) {
                continue;
            }
            for (std::size_t k = 0; k < sum.size(); ++k) {
                sum[k] = i[k] + j[k];
            }
            out.add(sum, d.bracket(a.degree(), x, b.degree(), y));
        }
    }
    return out;
}

FormalSeries apply(const MatrixQ& m, int target_degree, const FormalSeries& a)
{
    if (m.cols() != a.dim()) {
        throw ShapeError("linear map does not act on the series coefficients");
    }
    FormalSeries out(a.params(), a.order(), target_degree, static_cast<int>(m.rows()));
    for (const auto& [i, v] : a.coefficients()) {
        out.set(i, m * v);
    }
    return out;
}

FormalSeries apply_d(const Dgla& d, const FormalSeries& a)
{
    if (a.dim() != d.dim(a.degree())) {
        throw ShapeError("series does not live in the DGLA");
    }
    return apply(d.differential(a.degree()), a.degree() + 1, a);
}

FormalSeries truncate(const FormalSeries& a, int order)
{
    if (order < 0 || order > a.order()) {
        throw ShapeError("truncation order must be between 0 and the series order");
    }
    return a.with_order(order);
}

} // namespace fanolab::kuranishi
