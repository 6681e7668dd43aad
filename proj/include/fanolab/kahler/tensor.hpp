#pragma once

#include "fanolab/jets/jet.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace fanolab {

/// Index type of one tensor slot.
enum class Slot : std::uint8_t { up, down, up_bar, down_bar };

/// Tensor of jets in a holomorphic chart, stored with all m^rank components.
///
/// Differential forms keep full antisymmetric components, so a (0,q)-form
/// eta = (1/q!) eta_{j1..jq} dzbar^j1 ^ ... ^ dzbar^jq.
class TensorJet {
public:
    TensorJet() = default;
    TensorJet(int m, std::vector<Slot> slots, int order, int t_order = 0);

    static TensorJet scalar(const Jet& f);

    int dim() const noexcept { return m_; }
    int rank() const noexcept { return static_cast<int>(slots_.size()); }
    const std::vector<Slot>& slots() const noexcept { return slots_; }
    int count(Slot s) const;
    /// Smallest order over all components.
    int order() const;
    int t_order() const;
    std::size_t size() const noexcept { return c_.size(); }

    Jet& flat(std::size_t k) { return c_[k]; }
    const Jet& flat(std::size_t k) const { return c_[k]; }
    Jet& at(std::span<const int> idx) { return c_[flatten(idx)]; }
    const Jet& at(std::span<const int> idx) const { return c_[flatten(idx)]; }
    Jet& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
    const Jet& at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }
    /// Scalar tensors only.
    const Jet& value() const { return c_.front(); }

    std::size_t flatten(std::span<const int> idx) const;
    std::vector<int> unflatten(std::size_t k) const;

    TensorJet truncated(int order, int t_order) const;
    /// Truncates every component to the common minimum order.
    TensorJet normalized() const;
    double max_abs() const;

    TensorJet& operator+=(const TensorJet& o);
    TensorJet& operator-=(const TensorJet& o);
    TensorJet& operator*=(const Jet::scalar_type& s);

    friend TensorJet operator+(TensorJet a, const TensorJet& b) { return a += b; }
    friend TensorJet operator-(TensorJet a, const TensorJet& b) { return a -= b; }
    friend TensorJet operator*(TensorJet a, const Jet::scalar_type& s) { return a *= s; }
    friend TensorJet operator*(const Jet::scalar_type& s, TensorJet a) { return a *= s; }

    void check_shape(const TensorJet& o) const;

private:
    int m_ = 0;
    std::vector<Slot> slots_;
    std::vector<Jet> c_;
};

/// (p,q)-form: p holomorphic slots followed by q antiholomorphic slots.
using FormJet = TensorJet;
/// T'-valued (0,q)-form phi^i_{j1..jq}: one up slot followed by q antiholomorphic slots.
using VectorFormJet = TensorJet;

FormJet make_form(int m, int p, int q, int order, int t_order = 0);
VectorFormJet make_vector_form(int m, int q, int order, int t_order = 0);

/// Function viewed as a (0,0)-form.
FormJet function_form(const Jet& u);

bool is_form(const TensorJet& t);
bool is_vector_form(const TensorJet& t);

/// a + b after truncating both to the lower order; an empty a is replaced by b.
void accumulate(Jet& a, const Jet& b);

/// sign of the permutation taking `idx` to sorted order, 0 on a repeated index.
int permutation_sign(std::span<const int> idx);

/// Largest violation of antisymmetry within the antiholomorphic (and, separately, holomorphic) slots.
double antisymmetry_defect(const TensorJet& t);

} // namespace fanolab
