#include "fanolab/kahler/tensor.hpp"

#include <algorithm>
#include <limits>

namespace fanolab {

TensorJet::TensorJet(int m, std::vector<Slot> slots, int order, int t_order) : m_(m), slots_(std::move(slots))
{
    std::size_t n = 1;
    for (std::size_t k = 0; k < slots_.size(); ++k) {
        n *= static_cast<std::size_t>(m);
    }
    c_.assign(n, Jet(m, order, t_order));
}

TensorJet TensorJet::scalar(const Jet& f)
{
    TensorJet t(f.dim(), {}, f.order(), f.t_order());
    t.c_[0] = f;
    return t;
}

int TensorJet::count(Slot s) const
{
    return static_cast<int>(std::count(slots_.begin(), slots_.end(), s));
}

int TensorJet::order() const
{
    int o = std::numeric_limits<int>::max();
    for (const auto& j : c_) {
        o = std::min(o, j.order());
    }
    return o;
}

int TensorJet::t_order() const
{
    int o = std::numeric_limits<int>::max();
    for (const auto& j : c_) {
        o = std::min(o, j.t_order());
    }
    return o;
}

std::size_t TensorJet::flatten(std::span<const int> idx) const
{
    if (idx.size() != slots_.size()) {
        throw ShapeError("tensor index has wrong rank");
    }
    std::size_t k = 0;
    for (int i : idx) {
        if (i < 0 || i >= m_) {
            throw ShapeError("tensor index out of range");
        }
        k = k * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i);
    }
    return k;
}

std::vector<int> TensorJet::unflatten(std::size_t k) const
{
    std::vector<int> idx(slots_.size());
    for (std::size_t s = slots_.size(); s-- > 0;) {
        idx[s] = static_cast<int>(k % static_cast<std::size_t>(m_));
        k /= static_cast<std::size_t>(m_);
    }
    return idx;
}

TensorJet TensorJet::truncated(int order, int t_order) const
{
    TensorJet r = *this;
    for (auto& j : r.c_) {
        j = j.truncated(order, t_order);
    }
    return r;
}

TensorJet TensorJet::normalized() const
{
    return truncated(order(), t_order());
}

double TensorJet::max_abs() const
{
    double r = 0;
    for (const auto& j : c_) {
        r = std::max(r, j.max_abs());
    }
    return r;
}

void TensorJet::check_shape(const TensorJet& o) const
{
    if (m_ != o.m_ || slots_ != o.slots_) {
        throw ShapeError("tensor slot layouts differ");
    }
}

TensorJet& TensorJet::operator+=(const TensorJet& o)
{
    check_shape(o);
    for (std::size_t k = 0; k < c_.size(); ++k) {
        c_[k] = tadd(c_[k], o.c_[k]);
    }
    return *this;
}

TensorJet& TensorJet::operator-=(const TensorJet& o)
{
    check_shape(o);
    for (std::size_t k = 0; k < c_.size(); ++k) {
        c_[k] = tadd(c_[k], -o.c_[k]);
    }
    return *this;
}

TensorJet& TensorJet::operator*=(const Jet::scalar_type& s)
{
    for (auto& j : c_) {
        j *= s;
    }
    return *this;
}

FormJet make_form(int m, int p, int q, int order, int t_order)
{
    std::vector<Slot> s(static_cast<std::size_t>(p), Slot::down);
    s.insert(s.end(), static_cast<std::size_t>(q), Slot::down_bar);
    return TensorJet(m, std::move(s), order, t_order);
}

VectorFormJet make_vector_form(int m, int q, int order, int t_order)
{
    std::vector<Slot> s{Slot::up};
    s.insert(s.end(), static_cast<std::size_t>(q), Slot::down_bar);
    return TensorJet(m, std::move(s), order, t_order);
}

FormJet function_form(const Jet& u)
{
    return TensorJet::scalar(u);
}

bool is_form(const TensorJet& t)
{
    const auto& s = t.slots();
    auto it = std::find_if(s.begin(), s.end(), [](Slot x) { return x != Slot::down; });
    return std::all_of(it, s.end(), [](Slot x) { return x == Slot::down_bar; });
}

bool is_vector_form(const TensorJet& t)
{
    const auto& s = t.slots();
    return !s.empty() && s.front() == Slot::up &&
           std::all_of(s.begin() + 1, s.end(), [](Slot x) { return x == Slot::down_bar; });
}

void accumulate(Jet& a, const Jet& b)
{
    if (a.empty()) {
        a = b;
    } else {
        a = tadd(a, b);
    }
}

int permutation_sign(std::span<const int> idx)
{
    int sign = 1;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            if (idx[a] == idx[b]) {
                return 0;
            }
            if (idx[a] > idx[b]) {
                sign = -sign;
            }
        }
    }
    return sign;
}

double antisymmetry_defect(const TensorJet& t)
{
    double worst = 0;
    const auto& s = t.slots();
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto idx = t.unflatten(k);
        for (std::size_t a = 0; a + 1 < s.size(); ++a) {
            if (s[a] != s[a + 1] || (s[a] != Slot::down && s[a] != Slot::down_bar)) {
                continue;
            }
            auto sw = idx;
            std::swap(sw[a], sw[a + 1]);
            worst = std::max(worst, tadd(t.flat(k), t.at(sw)).max_abs());
        }
    }
    return worst;
}

} // namespace fanolab
