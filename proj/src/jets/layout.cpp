#include "fanolab/jets/layout.hpp"

#include "fanolab/jets/errors.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace fanolab::detail {

namespace {

// All exponent vectors of `vars` variables with total degree exactly `deg`,
// in lexicographically decreasing order.
void enumerate(int vars, int deg, std::vector<int>& current, int pos, std::vector<std::vector<int>>& out)
{
    if (pos == vars - 1) {
        current[static_cast<std::size_t>(pos)] = deg;
        out.push_back(current);
        return;
    }
    for (int e = deg; e >= 0; --e) {
        current[static_cast<std::size_t>(pos)] = e;
        enumerate(vars, deg - e, current, pos + 1, out);
    }
}

} // namespace

MonomialLayout::MonomialLayout(int m) : m_(m)
{
    const int nv = 2 * m;
    std::vector<std::vector<int>> all;
    counts_.resize(kMaxJetOrder + 1);
    for (int d = 0; d <= kMaxJetOrder; ++d) {
        std::vector<int> cur(static_cast<std::size_t>(nv), 0);
        enumerate(nv, d, cur, 0, all);
        counts_[static_cast<std::size_t>(d)] = static_cast<int>(all.size());
    }
    const auto n = all.size();
    degrees_.resize(n);
    exps_.reserve(n * static_cast<std::size_t>(nv));
    std::map<std::vector<int>, int> lookup;
    for (std::size_t k = 0; k < n; ++k) {
        degrees_[k] = std::accumulate(all[k].begin(), all[k].end(), 0);
        exps_.insert(exps_.end(), all[k].begin(), all[k].end());
        lookup.emplace(all[k], static_cast<int>(k));
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (degrees_[a] + degrees_[b] > kMaxJetOrder) {
                continue;
            }
            std::vector<int> sum(all[a]);
            for (int v = 0; v < nv; ++v) {
                sum[static_cast<std::size_t>(v)] += all[b][static_cast<std::size_t>(v)];
            }
            mul_.push_back({static_cast<int>(a), static_cast<int>(b), lookup.at(sum)});
        }
    }
    std::stable_sort(mul_.begin(), mul_.end(), [&](const MulTriple& x, const MulTriple& y) {
        return degrees_[static_cast<std::size_t>(x.out)] < degrees_[static_cast<std::size_t>(y.out)];
    });
    mul_counts_.resize(kMaxJetOrder + 1);
    for (int d = 0; d <= kMaxJetOrder; ++d) {
        mul_counts_[static_cast<std::size_t>(d)] = static_cast<int>(
            std::count_if(mul_.begin(), mul_.end(),
                          [&](const MulTriple& t) { return degrees_[static_cast<std::size_t>(t.out)] <= d; }));
    }

    raise_.assign(static_cast<std::size_t>(nv) * n, -1);
    swap_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (int v = 0; v < nv; ++v) {
            std::vector<int> up(all[k]);
            ++up[static_cast<std::size_t>(v)];
            if (auto it = lookup.find(up); it != lookup.end()) {
                raise_[static_cast<std::size_t>(v) * n + k] = it->second;
            }
        }
        std::vector<int> sw(all[k]);
        std::rotate(sw.begin(), sw.begin() + m, sw.end());
        swap_[k] = lookup.at(sw);
    }
}

int MonomialLayout::index(std::span<const int> exps) const
{
    if (static_cast<int>(exps.size()) != vars()) {
        throw ShapeError("monomial has wrong number of exponents");
    }
    const int deg = std::accumulate(exps.begin(), exps.end(), 0);
    if (deg > kMaxJetOrder) {
        return -1;
    }
    const int lo = deg == 0 ? 0 : count(deg - 1);
    const int hi = count(deg);
    for (int k = lo; k < hi; ++k) {
        if (std::equal(exps.begin(), exps.end(), exponents(k).begin())) {
            return k;
        }
    }
    return -1;
}

const MonomialLayout& MonomialLayout::get(int m)
{
    if (m < 1 || m > kMaxJetDim) {
        throw ShapeError("chart dimension must lie in [1, " + std::to_string(kMaxJetDim) + "]");
    }
    static std::array<std::unique_ptr<MonomialLayout>, kMaxJetDim + 1> cache;
    static std::array<std::once_flag, kMaxJetDim + 1> flags;
    std::call_once(flags[static_cast<std::size_t>(m)],
                   [m] { cache[static_cast<std::size_t>(m)].reset(new MonomialLayout(m)); });
    return *cache[static_cast<std::size_t>(m)];
}

} // namespace fanolab::detail
