#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fanolab {

/// Largest truncation order the jet kernel supports.
inline constexpr int kMaxJetOrder = 6;
/// Largest chart dimension the jet kernel supports.
inline constexpr int kMaxJetDim = 4;

/// Identifies one chart variable: z^i, its conjugate, or the deformation parameter t.
struct Var {
    enum class Kind : std::uint8_t { z, zbar, t };
    Kind kind = Kind::z;
    int index = 0;

    friend bool operator==(const Var&, const Var&) = default;
};

inline constexpr Var z(int i) { return {Var::Kind::z, i}; }
inline constexpr Var zbar(int i) { return {Var::Kind::zbar, i}; }
inline constexpr Var tvar() { return {Var::Kind::t, 0}; }

namespace detail {

struct MulTriple {
    int a;
    int b;
    int out;
};

/// Monomials in z^1..z^m, zbar^1..zbar^m enumerated in graded order up to kMaxJetOrder.
///
/// The graded order makes every lower truncation a prefix, so a jet of order k
/// stores exactly the first count(k) coefficients of each t-block. Layouts are
/// built once per dimension and never mutated afterwards.
class MonomialLayout {
public:
    static const MonomialLayout& get(int m);

    int dim() const noexcept { return m_; }
    int vars() const noexcept { return 2 * m_; }

    /// Number of monomials of total degree <= order.
    int count(int order) const { return counts_[static_cast<std::size_t>(order)]; }
    int degree(int idx) const { return degrees_[static_cast<std::size_t>(idx)]; }
    std::span<const int> exponents(int idx) const
    {
        return {exps_.data() + static_cast<std::size_t>(idx) * static_cast<std::size_t>(vars()),
                static_cast<std::size_t>(vars())};
    }
    /// Index of a monomial, -1 when its degree exceeds kMaxJetOrder.
    int index(std::span<const int> exps) const;

    /// Products a*b landing at degree <= order.
    std::span<const MulTriple> mul_table(int order) const
    {
        return {mul_.data(), static_cast<std::size_t>(mul_counts_[static_cast<std::size_t>(order)])};
    }
    /// For target monomial k, the index of k + e_var (or -1).
    int raise(int var, int idx) const
    {
        return raise_[static_cast<std::size_t>(var) * exps_count() + static_cast<std::size_t>(idx)];
    }
    /// Index of the monomial with z and zbar exponents swapped.
    int swapped(int idx) const { return swap_[static_cast<std::size_t>(idx)]; }

private:
    explicit MonomialLayout(int m);
    std::size_t exps_count() const { return degrees_.size(); }

    int m_;
    std::vector<int> exps_;
    std::vector<int> degrees_;
    std::vector<int> counts_;
    std::vector<MulTriple> mul_;
    std::vector<int> mul_counts_;
    std::vector<int> raise_;
    std::vector<int> swap_;
};

} // namespace detail
} // namespace fanolab
