#include "fanolab/spectral/galerkin.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fanolab::spectral {

namespace {

double binomial(int n, int k)
{
    double r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double condition_number(const Eigen::MatrixXcd& b)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXcd hermitian(const Eigen::MatrixXcd& m)
{
    return (m + m.adjoint()) * 0.5;
}

/// X^H diag(w) X
Eigen::MatrixXcd gram(const Eigen::MatrixXcd& x, const Eigen::VectorXd& w)
{
    return hermitian(x.adjoint() * (w.asDiagonal() * x));
}

} // namespace

// ---- basis ----

SphereFunction BasisSet::function(int k) const
{
    std::vector<RationalTerm> terms;
    for (int j = 0; j < size(); ++j) {
        const double t = transform(j, k);
        if (t != 0) {
            const auto [a, b] = index[static_cast<std::size_t>(j)];
            terms.push_back({t, a, b, N});
        }
    }
    return SphereFunction(std::move(terms));
}

Eigen::VectorXcd BasisSet::constant_coefficients() const
{
    // (1+|z|^2)^N / (1+|z|^2)^N = sum_a C(N,a) |z|^2a / (1+|z|^2)^N
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(size());
    for (int k = 0; k < size(); ++k) {
        const auto [a, b] = index[static_cast<std::size_t>(k)];
        if (a == b) {
            raw(k) = binomial(N, a);
        }
    }
    return transform.triangularView<Eigen::Upper>().solve(raw).cast<cd>();
}

Eigen::VectorXcd BasisSet::conjugate_coefficients(const Eigen::VectorXcd& c) const
{
    // conj(b_ab) = b_ba and the transform is the same on frequencies m and -m.
    Eigen::VectorXcd out(c.size());
    for (int k = 0; k < size(); ++k) {
        const auto [a, b] = index[static_cast<std::size_t>(k)];
        out(b * (N + 1) + a) = std::conj(c(k));
    }
    return out;
}

SphereFunction BasisSet::combination(const Eigen::VectorXcd& c) const
{
    const Eigen::VectorXcd raw = transform.cast<cd>() * c;
    std::vector<RationalTerm> terms;
    for (int k = 0; k < size(); ++k) {
        if (raw(k) != cd(0)) {
            const auto [a, b] = index[static_cast<std::size_t>(k)];
            terms.push_back({raw(k), a, b, N});
        }
    }
    return SphereFunction(std::move(terms));
}

BasisSet make_basis(int N, bool orthonormalize)
{
    if (N < 1) {
        throw ShapeError("basis degree must be >= 1");
    }
    BasisSet b;
    b.N = N;
    for (int a = 0; a <= N; ++a) {
        for (int c = 0; c <= N; ++c) {
            b.index.emplace_back(a, c);
        }
    }
    const int k = b.size();
    b.transform = Eigen::MatrixXd::Identity(k, k);
    if (!orthonormalize) {
        return b;
    }
    // <b_{a,a-m}, b_{c,c-m}> = 4 pi q! (2N-q)! / (2N+1)! with q = a + c - m, in long double.
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<long double> fact(static_cast<std::size_t>(2 * N + 2), 1.0L);
    for (std::size_t i = 1; i < fact.size(); ++i) {
        fact[i] = fact[i - 1] * static_cast<long double>(i);
    }
    const long double four_pi = 4.0L * 3.141592653589793238462643383279502884L;
    for (int m = -N; m <= N; ++m) {
        std::vector<int> members;
        for (int j = 0; j < k; ++j) {
            const auto [a, c] = b.index[static_cast<std::size_t>(j)];
            if (a - c == m) {
                members.push_back(j);
            }
        }
        const auto n = static_cast<Eigen::Index>(members.size());
        LMat g(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index s = 0; s < n; ++s) {
                const int a = b.index[static_cast<std::size_t>(members[static_cast<std::size_t>(r)])].first;
                const int c = b.index[static_cast<std::size_t>(members[static_cast<std::size_t>(s)])].first;
                const int q = a + c - m;
                g(r, s) = four_pi * fact[static_cast<std::size_t>(q)] * fact[static_cast<std::size_t>(2 * N - q)] /
                          fact[static_cast<std::size_t>(2 * N + 1)];
            }
        }
        // g = L L^T, phi = b L^-T is orthonormal
        const Eigen::LLT<LMat> llt(g);
        const LMat t = llt.matrixU().solve(LMat::Identity(n, n));
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index s = 0; s < n; ++s) {
                b.transform(members[static_cast<std::size_t>(r)], members[static_cast<std::size_t>(s)]) =
                    static_cast<double>(t(r, s));
            }
        }
    }
    return b;
}

// ---- discretization ----

Discretization::Discretization(QuadratureGrid grid, BasisSet basis, MetricOnGrid metric)
    : grid_(std::move(grid)), basis_(std::move(basis)), metric_(std::move(metric))
{
    if (metric_.size() != grid_.size()) {
        throw ShapeError("metric was sampled on a different grid");
    }
}

const Eigen::MatrixXcd& Discretization::table(int i, int j) const
{
    auto it = tables_.find({i, j});
    if (it != tables_.end()) {
        return it->second;
    }
    Eigen::MatrixXcd t(static_cast<Eigen::Index>(nodes()), basis_.size());
    for (int k = 0; k < basis_.size(); ++k) {
        t.col(k) = basis_.function(k).derivative(i, j).evaluate(grid_.z);
    }
    return tables_.emplace(std::pair{i, j}, std::move(t)).first->second;
}

Eigen::VectorXcd Discretization::derivative(const Eigen::VectorXcd& c, int i, int j) const
{
    return table(i, j) * c;
}

const Eigen::VectorXcd& Discretization::log_g(int a, int b) const
{
    auto it = log_g_.find({a, b});
    if (it == log_g_.end()) {
        it = log_g_.emplace(std::pair{a, b}, metric_.log_g_derivative(a, b)).first;
    }
    return it->second;
}

const Eigen::VectorXcd& Discretization::f(int a, int b) const
{
    auto it = f_.find({a, b});
    if (it == f_.end()) {
        it = f_.emplace(std::pair{a, b}, metric_.f_derivative(a, b)).first;
    }
    return it->second;
}

// ---- pairings ----

namespace {

const Eigen::VectorXd& measure(const Discretization& d, bool weighted)
{
    return weighted ? d.metric().weighted : d.metric().omega;
}

} // namespace

cd Pairings::functions(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, bool weighted) const
{
    return (measure(d, weighted).cast<cd>().array() * u.array() * v.conjugate().array()).sum();
}

cd Pairings::forms01(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, bool weighted) const
{
    const Eigen::VectorXd w = measure(d, weighted).cwiseQuotient(d.metric().g);
    return (w.cast<cd>().array() * a.array() * b.conjugate().array()).sum();
}

cd Pairings::vectors(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, bool weighted) const
{
    const Eigen::VectorXd w = measure(d, weighted).cwiseProduct(d.metric().g);
    return (w.cast<cd>().array() * x.array() * y.conjugate().array()).sum();
}

cd Pairings::beltrami(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& tau, bool weighted) const
{
    return functions(psi, tau, weighted);
}

// ---- pointwise operators ----

namespace ops {

namespace {

Eigen::ArrayXcd ginv(const Discretization& d)
{
    return d.metric().g.cwiseInverse().cast<cd>().array();
}

} // namespace

Eigen::VectorXcd dbar(const Discretization& d, const Eigen::VectorXcd& c)
{
    return d.derivative(c, 0, 1);
}

Eigen::VectorXcd laplacian(const Discretization& d, const Eigen::VectorXcd& c, bool weighted)
{
    Eigen::ArrayXcd s = d.derivative(c, 1, 1).array();
    if (weighted) {
        s += d.f(1, 0).array() * d.derivative(c, 0, 1).array();
    }
    return -(s * ginv(d)).matrix();
}

Eigen::VectorXcd dbar_laplacian(const Discretization& d, const Eigen::VectorXcd& c)
{
    const Eigen::ArrayXcd u01 = d.derivative(c, 0, 1).array();
    const Eigen::ArrayXcd fz = d.f(1, 0).array();
    const Eigen::ArrayXcd inner = d.derivative(c, 1, 1).array() + fz * u01;
    const Eigen::ArrayXcd dinner =
        d.derivative(c, 1, 2).array() + d.f(1, 1).array() * u01 + fz * d.derivative(c, 0, 2).array();
    return -((dinner - inner * d.log_g(0, 1).array()) * ginv(d)).matrix();
}

Eigen::VectorXcd grad(const Discretization& d, const Eigen::VectorXcd& c)
{
    return (d.derivative(c, 0, 1).array() * ginv(d)).matrix();
}

Eigen::VectorXcd dbar_grad(const Discretization& d, const Eigen::VectorXcd& c)
{
    const Eigen::ArrayXcd gpsi = d.derivative(c, 0, 2).array() - d.derivative(c, 0, 1).array() * d.log_g(0, 1).array();
    return (gpsi * ginv(d)).matrix();
}

namespace {

/// d_z(g psi) for psi = dbar grad' v
Eigen::ArrayXcd p_term(const Discretization& d, const Eigen::VectorXcd& c)
{
    return d.derivative(c, 1, 2).array() - d.derivative(c, 1, 1).array() * d.log_g(0, 1).array() -
           d.derivative(c, 0, 1).array() * d.log_g(1, 1).array();
}

} // namespace

Eigen::VectorXcd div_dbar_grad(const Discretization& d, const Eigen::VectorXcd& c, bool weighted)
{
    Eigen::ArrayXcd out = p_term(d, c) * ginv(d);
    if (weighted) {
        out += d.f(1, 0).array() * dbar_grad(d, c).array();
    }
    return out.matrix();
}

Eigen::VectorXcd dbar_star_div_dbar_grad(const Discretization& d, const Eigen::VectorXcd& c)
{
    const Eigen::ArrayXcd p = p_term(d, c);
    const Eigen::ArrayXcd hb = d.log_g(0, 1).array();
    const Eigen::ArrayXcd pz = d.derivative(c, 2, 2).array() - d.derivative(c, 2, 1).array() * hb -
                               2.0 * d.derivative(c, 1, 1).array() * d.log_g(1, 1).array() -
                               d.derivative(c, 0, 1).array() * d.log_g(2, 1).array();
    // dbar* a = -g^{-1} d_z a on (0,1)-forms; d_z(P/g) = (P_z - h_z P)/g
    const Eigen::ArrayXcd gi = ginv(d);
    return -((pz - d.log_g(1, 0).array() * p) * gi * gi).matrix();
}

} // namespace ops

// ---- pencils ----

Pencil assemble_laplacian_functions(const Discretization& d)
{
    Pencil p;
    p.kind = "functions";
    const Eigen::VectorXd& mu = d.metric().weighted;
    p.B = gram(d.table(0, 0), mu);
    p.A = gram(d.table(0, 1), mu.cwiseQuotient(d.metric().g));
    p.trial = Eigen::MatrixXcd::Identity(d.basis().size(), d.basis().size());
    p.sbar = d.metric().sbar;
    return p;
}

Pencil assemble_laplacian_01forms(const Discretization& d)
{
    Pencil p;
    p.kind = "forms01";
    const int k = d.basis().size();
    // Orthonormal complement of the constants: dbar is injective on it.
    const Eigen::VectorXcd c1 = d.basis().constant_coefficients();
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(c1);
    const Eigen::MatrixXcd q = Eigen::MatrixXcd(qr.householderQ()).rightCols(k - 1);
    p.trial = q;

    const Eigen::VectorXd& mu = d.metric().weighted;
    const Eigen::VectorXcd gi = d.metric().g.cwiseInverse().cast<cd>();
    const Eigen::MatrixXcd eta = d.table(0, 1) * q;
    p.B = gram(eta, mu.cwiseQuotient(d.metric().g));

    // dbar*_f eta = Delta_f u for eta = dbar u
    const Eigen::MatrixXcd lap =
        -(gi.asDiagonal() * (d.table(1, 1) + d.f(1, 0).asDiagonal() * d.table(0, 1))) * q;
    p.A = gram(lap, mu);
    // (0,2)-forms on a curve have no components, so dbar eta contributes an empty block.
    const Eigen::MatrixXcd dbar_eta(0, k - 1);
    p.A += dbar_eta.adjoint() * dbar_eta;
    p.sbar = d.metric().sbar;
    return p;
}

// ---- spectrum ----

std::vector<int> cluster_ids(const std::vector<double>& sorted, double tol)
{
    std::vector<int> id(sorted.size(), 0);
    int c = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (std::abs(sorted[i] - sorted[i - 1]) > tol * std::max(1.0, std::abs(sorted[i]))) {
            ++c;
        }
        id[i] = c;
    }
    return id;
}

std::vector<int> SpectrumResult::cluster_near(double target) const
{
    std::vector<int> out;
    if (eigenvalues.empty()) {
        return out;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
        if (std::abs(eigenvalues[i] - target) < std::abs(eigenvalues[best] - target)) {
            best = i;
        }
    }
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (cluster[i] == cluster[best]) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

double SpectrumResult::first_above(double floor) const
{
    for (double v : eigenvalues) {
        if (v > floor) {
            return v;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

SpectrumResult solve_pencil(const Pencil& p, double cluster_tolerance)
{
    SpectrumResult r;
    r.kind = p.kind;
    r.cluster_tolerance = cluster_tolerance;
    r.sbar = p.sbar;
    r.condition = condition_number(p.B);
    if (!(r.condition <= kConditionLimit)) {
        std::ostringstream os;
        os << p.kind << " Gram matrix condition number " << r.condition << " exceeds " << kConditionLimit;
        throw ConditioningError(os.str(), r.condition);
    }
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(p.A, p.B,
                                                                        Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) {
        throw SingularError(p.kind + " pencil eigensolver failed");
    }
    const auto& ev = ges.eigenvalues();
    const Eigen::MatrixXcd& x = ges.eigenvectors();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        r.eigenvalues.push_back(ev(i));
        const Eigen::VectorXcd bx = p.B * x.col(i);
        r.residuals.push_back((p.A * x.col(i) - ev(i) * bx).norm() / bx.norm());
    }
    r.vectors = p.trial * x;
    r.cluster = cluster_ids(r.eigenvalues, cluster_tolerance);
    r.multiplicity.assign(r.cluster.empty() ? 0 : static_cast<std::size_t>(r.cluster.back() + 1), 0);
    for (int c : r.cluster) {
        ++r.multiplicity[static_cast<std::size_t>(c)];
    }
    return r;
}

} // namespace fanolab::spectral
