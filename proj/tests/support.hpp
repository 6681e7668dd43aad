#pragma once

#include "fanolab/jets/jet.hpp"
#include "fanolab/kahler/tensor.hpp"

#include <algorithm>
#include <numeric>

#include <complex>
#include <functional>
#include <random>

namespace fanolab::testing {

using cd = std::complex<double>;

/// Jet with small Gaussian-integer coefficients, so ring operations are exact in double.
inline Jet integer_jet(int m, int order, std::mt19937_64& rng, int t_order = 0, int range = 3)
{
    std::uniform_int_distribution<int> d(-range, range);
    Jet j(m, order, t_order);
    for (int t = 0; t <= t_order; ++t) {
        for (int k = 0; k < j.block(); ++k) {
            j.raw(k, t) = cd(d(rng), d(rng));
        }
    }
    j.set_real(false);
    return j;
}

/// Jet with coefficients uniform in the unit square.
inline Jet random_jet(int m, int order, std::mt19937_64& rng, int t_order = 0)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Jet j(m, order, t_order);
    for (int t = 0; t <= t_order; ++t) {
        for (int k = 0; k < j.block(); ++k) {
            j.raw(k, t) = cd(d(rng), d(rng));
        }
    }
    j.set_real(false);
    return j;
}

/// Real potential |z|^2 + (small Hermitian quadratic) + amp * (random terms of degree >= 3).
inline Jet random_potential(int m, int order, std::mt19937_64& rng, double amp = 0.3, int t_order = 0)
{
    Jet k = random_jet(m, order, rng, t_order);
    const auto& lay = k.layout();
    for (int t = 0; t <= t_order; ++t) {
        for (int n = 0; n < k.block(); ++n) {
            const auto e = lay.exponents(n);
            const int deg = lay.degree(n);
            int hol = 0;
            for (int i = 0; i < m; ++i) {
                hol += e[static_cast<std::size_t>(i)];
            }
            if (deg < 2 || (deg == 2 && t == 0 && hol != 1)) {
                k.raw(n, t) = 0;
            } else {
                k.raw(n, t) *= amp;
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        std::vector<int> e(static_cast<std::size_t>(2 * m), 0);
        e[static_cast<std::size_t>(i)] = 1;
        e[static_cast<std::size_t>(m + i)] = 1;
        k.raw(lay.index(e)) += 1.0;
    }
    return real_part(k);
}

/// Random tensor of jets; antisymmetrized within the down_bar block (and within the down block).
inline TensorJet random_tensor(int m, std::vector<Slot> slots, int order, std::mt19937_64& rng, int t_order = 0,
                               bool integer = false)
{
    TensorJet t(m, slots, order, t_order);
    for (std::size_t n = 0; n < t.size(); ++n) {
        t.flat(n) = integer ? integer_jet(m, order, rng, t_order) : random_jet(m, order, rng, t_order);
    }
    TensorJet out(m, slots, order, t_order);
    for (std::size_t n = 0; n < t.size(); ++n) {
        const auto idx = t.unflatten(n);
        // Sum over permutations inside each block of equal antisymmetric slots.
        std::vector<std::pair<std::size_t, std::size_t>> blocks;
        for (std::size_t a = 0; a < slots.size();) {
            std::size_t b = a;
            while (b < slots.size() && slots[b] == slots[a]) {
                ++b;
            }
            if (slots[a] == Slot::down || slots[a] == Slot::down_bar) {
                blocks.emplace_back(a, b);
            }
            a = b;
        }
        Jet acc(m, order, t_order);
        std::function<void(std::size_t, std::vector<int>&, int)> rec = [&](std::size_t bi, std::vector<int>& cur,
                                                                             int sign) {
            if (bi == blocks.size()) {
                acc += t.at(cur) * cd(sign);
                return;
            }
            const auto [a, b] = blocks[bi];
            std::vector<int> perm(b - a);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<int> next = cur;
                for (std::size_t r = 0; r < perm.size(); ++r) {
                    next[a + r] = idx[a + static_cast<std::size_t>(perm[r])];
                }
                rec(bi + 1, next, sign * permutation_sign(perm));
            } while (std::next_permutation(perm.begin(), perm.end()));
        };
        std::vector<int> cur = idx;
        rec(0, cur, 1);
        out.flat(n) = acc;
    }
    return out;
}

inline double diff(const TensorJet& a, const TensorJet& b)
{
    const int o = std::min(a.order(), b.order());
    const int t = std::min(a.t_order(), b.t_order());
    return (a.truncated(o, t) - b.truncated(o, t)).max_abs();
}

inline double diff(const Jet& a, const Jet& b)
{
    return tadd(a, -b).max_abs();
}

} // namespace fanolab::testing
