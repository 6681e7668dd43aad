#pragma once

#include "fanolab/jets/jet.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fanolab {

/// Dense matrix of jets sharing one shape.
template <class Scalar>
class BasicJetMatrix {
public:
    using jet_type = BasicJet<Scalar>;
    using ConstMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BasicJetMatrix() = default;
    BasicJetMatrix(int rows, int cols, int m, int order, int t_order = 0)
        : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows * cols), jet_type(m, order, t_order))
    {
    }

    static BasicJetMatrix identity(int n, int m, int order, int t_order = 0)
    {
        BasicJetMatrix r(n, n, m, order, t_order);
        for (int i = 0; i < n; ++i) {
            r(i, i) = jet_type::constant(m, order, Scalar(1), t_order);
        }
        return r;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int order() const { return e_.front().order(); }
    int t_order() const { return e_.front().t_order(); }
    int dim() const { return e_.front().dim(); }

    jet_type& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
    const jet_type& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * cols_ + j)]; }

    /// Matrix of constant terms.
    ConstMatrix value() const
    {
        ConstMatrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                r(i, j) = (*this)(i, j).value();
            }
        }
        return r;
    }

    static BasicJetMatrix from_constant(const ConstMatrix& c, int m, int order, int t_order = 0)
    {
        BasicJetMatrix r(static_cast<int>(c.rows()), static_cast<int>(c.cols()), m, order, t_order);
        for (int i = 0; i < r.rows_; ++i) {
            for (int j = 0; j < r.cols_; ++j) {
                r(i, j) = jet_type::constant(m, order, c(i, j), t_order);
            }
        }
        return r;
    }

    BasicJetMatrix transpose() const
    {
        BasicJetMatrix r = *this;
        r.rows_ = cols_;
        r.cols_ = rows_;
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                r(j, i) = (*this)(i, j);
            }
        }
        return r;
    }

    BasicJetMatrix truncated(int order, int t_order) const
    {
        BasicJetMatrix r = *this;
        for (auto& x : r.e_) {
            x = x.truncated(order, t_order);
        }
        return r;
    }

    double max_abs() const
    {
        double r = 0;
        for (const auto& x : e_) {
            r = std::max(r, x.max_abs());
        }
        return r;
    }

    friend BasicJetMatrix operator+(BasicJetMatrix a, const BasicJetMatrix& b)
    {
        a.check_same_size(b);
        for (std::size_t k = 0; k < a.e_.size(); ++k) {
            a.e_[k] += b.e_[k];
        }
        return a;
    }
    friend BasicJetMatrix operator-(BasicJetMatrix a, const BasicJetMatrix& b)
    {
        a.check_same_size(b);
        for (std::size_t k = 0; k < a.e_.size(); ++k) {
            a.e_[k] -= b.e_[k];
        }
        return a;
    }
    friend BasicJetMatrix operator*(BasicJetMatrix a, const Scalar& s)
    {
        for (auto& x : a.e_) {
            x *= s;
        }
        return a;
    }
    friend BasicJetMatrix operator*(const BasicJetMatrix& a, const BasicJetMatrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw ShapeError("jet matrix product: inner dimensions differ");
        }
        BasicJetMatrix r(a.rows_, b.cols_, a.dim(), a.order(), a.t_order());
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < b.cols_; ++j) {
                jet_type s(a.dim(), a.order(), a.t_order());
                for (int k = 0; k < a.cols_; ++k) {
                    s += a(i, k) * b(k, j);
                }
                r(i, j) = std::move(s);
            }
        }
        return r;
    }

    /// Entry-wise conjugate as functions (not transposed).
    friend BasicJetMatrix conj(BasicJetMatrix a)
    {
        for (auto& x : a.e_) {
            x = conj(x);
        }
        return a;
    }

    /// Inverse via the Neumann series around the constant part.
    friend BasicJetMatrix inverse(const BasicJetMatrix& a)
    {
        a.check_square();
        const int n = a.rows_;
        const ConstMatrix c = a.value();
        Eigen::FullPivLU<ConstMatrix> lu(c);
        if (!lu.isInvertible()) {
            throw SingularError("jet matrix inverse: constant term is singular");
        }
        const ConstMatrix eye = ConstMatrix::Identity(n, n);
        // Back substitution keeps triangular constant parts exact.
        ConstMatrix c_inv;
        if (c.isUpperTriangular(0.0)) {
            c_inv = c.template triangularView<Eigen::Upper>().solve(eye);
        } else if (c.isLowerTriangular(0.0)) {
            c_inv = c.template triangularView<Eigen::Lower>().solve(eye);
        } else {
            c_inv = lu.inverse();
        }
        const int m = a.dim();
        const int o = a.order();
        const int t = a.t_order();
        const BasicJetMatrix ci = from_constant(c_inv, m, o, t);
        // a = c (I + N) with N = c^{-1} a - I nilpotent; a^{-1} = sum (-N)^k c^{-1}.
        const BasicJetMatrix nil = ci * a - identity(n, m, o, t);
        BasicJetMatrix sum = identity(n, m, o, t);
        BasicJetMatrix p = sum;
        const BasicJetMatrix neg = nil * Scalar(-1);
        for (int k = 1; k <= o + t; ++k) {
            p = p * neg;
            sum = sum + p;
        }
        return sum * ci;
    }

    /// Determinant by cofactor expansion.
    friend jet_type det(const BasicJetMatrix& a)
    {
        a.check_square();
        std::vector<int> cols(static_cast<std::size_t>(a.rows_));
        for (int i = 0; i < a.rows_; ++i) {
            cols[static_cast<std::size_t>(i)] = i;
        }
        return a.cofactor_det(0, cols);
    }

    friend jet_type logdet(const BasicJetMatrix& a) { return log(det(a)); }

private:
    void check_square() const
    {
        if (rows_ != cols_) {
            throw ShapeError("jet matrix is not square");
        }
    }
    void check_same_size(const BasicJetMatrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw ShapeError("jet matrix sizes differ");
        }
    }

    jet_type cofactor_det(int row, const std::vector<int>& cols) const
    {
        if (cols.size() == 1) {
            return (*this)(row, cols[0]);
        }
        jet_type s(dim(), order(), t_order());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            std::vector<int> rest;
            rest.reserve(cols.size() - 1);
            for (std::size_t l = 0; l < cols.size(); ++l) {
                if (l != k) {
                    rest.push_back(cols[l]);
                }
            }
            jet_type term = (*this)(row, cols[k]) * cofactor_det(row + 1, rest);
            if (k % 2) {
                s -= term;
            } else {
                s += term;
            }
        }
        return s;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<jet_type> e_;
};

using JetMatrix = BasicJetMatrix<std::complex<double>>;

} // namespace fanolab
