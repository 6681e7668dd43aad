#pragma once

#include "fanolab/kuranishi/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace fanolab::kuranishi {

/// Basis vector e^degree_index.
struct BasisElement {
    int degree = 0;
    int index = 0;
    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

std::string to_string(const BasisElement& e);

/// [e^p_i, e^q_j] has coefficient c on e^(p+q)_k.
struct BracketEntry {
    BasisElement left;
    BasisElement right;
    int result = 0;
    Rational c;
};

/// Finite-dimensional graded Lie algebra with differential and inner product.
///
/// Degrees not listed have dimension 0. d maps degree k to k+1 and is stored as a
/// dim(k+1) x dim(k) matrix; unset differentials and brackets are zero, and unset
/// inner products are the identity.
class Dgla {
public:
    Dgla() = default;
    /// Degrees strictly increasing, dims >= 0.
    Dgla(std::vector<int> degrees, std::vector<int> dims, std::string name = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<int>& degrees() const noexcept { return degrees_; }
    int dim(int degree) const;

    void set_differential(int degree, MatrixQ d);
    void set_inner_product(int degree, MatrixQ m);
    /// Adds c to the coefficient of e^(p+q)_k in [e^p_i, e^q_j].
    void add_bracket(BasisElement left, BasisElement right, int k, const Rational& c);

    /// dim(degree+1) x dim(degree)
    MatrixQ differential(int degree) const;
    MatrixQ inner_product(int degree) const;
    bool has_differential(int degree) const { return d_.count(degree) != 0; }
    bool has_inner_product(int degree) const { return metric_.count(degree) != 0; }

    /// Nonzero structure constants in (p, i, q, j, k) order.
    std::vector<BracketEntry> bracket_entries() const;

    VectorQ apply_d(int degree, const VectorQ& x) const;
    /// [x, y] for x of degree p, y of degree q, in degree p + q.
    VectorQ bracket(int p, const VectorQ& x, int q, const VectorQ& y) const;
    VectorQ basis_vector(const BasisElement& e) const;

private:
    void check_element(const BasisElement& e) const;

    std::string name_;
    std::vector<int> degrees_;
    std::map<int, int> dims_;
    std::map<int, MatrixQ> d_;
    std::map<int, MatrixQ> metric_;
    /// (p, q) -> (i, j, k) -> c
    std::map<std::pair<int, int>, std::map<std::tuple<int, int, int>, Rational>> brackets_;
};

/// -1 to the power n, for any integer n.
int sign_power(int n);

/// Harmonic theory of each degree for the inner product of the DGLA.
struct HodgeDegree {
    int degree = 0;
    /// d^*: degree -> degree - 1, the adjoint of d from degree - 1.
    MatrixQ codifferential;
    /// d d^* + d^* d
    MatrixQ laplacian;
    /// Orthogonal projector onto ker laplacian.
    MatrixQ harmonic;
    /// Inverse of the Laplacian on the complement of its kernel, 0 on the kernel.
    MatrixQ green;
    /// Basis of the harmonic space, reduced-echelon columns.
    MatrixQ harmonic_basis;
};

class HodgeData {
public:
    explicit HodgeData(const Dgla& d);

    const HodgeDegree& at(int degree) const;
    bool has(int degree) const { return degrees_.count(degree) != 0; }
    std::vector<int> degrees() const;

    /// Delta G = G Delta = I - H, H^2 = H and GH = HG = 0 exactly, in every degree.
    bool identities_hold() const;

private:
    std::map<int, HodgeDegree> degrees_;
};

struct Violation {
    std::string axiom;
    std::vector<BasisElement> witness;
    /// Degree and index of the first nonzero component of the defect.
    BasisElement component;
    Rational defect;
    std::string describe() const;
};

struct ValidationReport {
    std::vector<Violation> violations;
    /// Number of failing instances per axiom, including ones not listed.
    std::map<std::string, int> failures;
    /// Present when every axiom holds.
    std::optional<HodgeData> hodge;

    bool valid() const noexcept { return violations.empty(); }
    /// Throws AxiomError naming the first violation.
    void require_valid() const;
};

/// Checks shapes, d o d = 0, graded antisymmetry, graded Leibniz, graded Jacobi and
/// positivity of the inner products exactly on basis elements, then builds HodgeData.
ValidationReport dgla_validate(const Dgla& d, int max_listed_per_axiom = 8);

} // namespace fanolab::kuranishi
