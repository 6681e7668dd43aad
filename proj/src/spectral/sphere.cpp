#include "fanolab/spectral/sphere.hpp"

#include "fanolab/kahler/metric.hpp"
#include "fanolab/kahler/operators.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace fanolab::spectral {

namespace {

constexpr int kNodeJetOrder = 4;

double factorial(int n)
{
    double r = 1;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

Eigen::VectorXcd jet_derivative(const std::vector<Jet>& jets, int a, int b)
{
    Eigen::VectorXcd out(static_cast<Eigen::Index>(jets.size()));
    const double scale = factorial(a) * factorial(b);
    for (std::size_t n = 0; n < jets.size(); ++n) {
        out(static_cast<Eigen::Index>(n)) = jets[n].coeff({a, b}) * scale;
    }
    return out;
}

} // namespace

// ---- SphereFunction ----

SphereFunction::SphereFunction(std::vector<RationalTerm> terms) : terms_(std::move(terms))
{
    simplify();
}

SphereFunction SphereFunction::term(cd c, int p, int q, int k)
{
    if (p < 0 || q < 0 || k < 0) {
        throw std::invalid_argument("negative exponent in rational term");
    }
    return SphereFunction({RationalTerm{c, p, q, k}});
}

SphereFunction SphereFunction::height()
{
    return term(1.0, 1, 1, 1) + term(-1.0, 0, 0, 1);
}

void SphereFunction::simplify()
{
    std::map<std::tuple<int, int, int>, cd> acc;
    for (const auto& t : terms_) {
        acc[{t.k, t.p, t.q}] += t.c;
    }
    terms_.clear();
    for (const auto& [key, c] : acc) {
        if (c != cd(0)) {
            terms_.push_back({c, std::get<1>(key), std::get<2>(key), std::get<0>(key)});
        }
    }
}

SphereFunction SphereFunction::d(bool bar) const
{
    // d_z (z^p zbar^q s^-k) = p z^(p-1) zbar^q s^-k - k z^p zbar^(q+1) s^-(k+1)
    std::vector<RationalTerm> out;
    for (const auto& t : terms_) {
        const int a = bar ? t.q : t.p;
        if (a > 0) {
            RationalTerm r = t;
            r.c *= static_cast<double>(a);
            (bar ? r.q : r.p) -= 1;
            out.push_back(r);
        }
        if (t.k > 0) {
            RationalTerm r = t;
            r.c *= -static_cast<double>(t.k);
            (bar ? r.p : r.q) += 1;
            r.k += 1;
            out.push_back(r);
        }
    }
    return SphereFunction(std::move(out));
}

SphereFunction SphereFunction::derivative(int i, int j) const
{
    SphereFunction r = *this;
    for (int n = 0; n < i; ++n) {
        r = r.d(false);
    }
    for (int n = 0; n < j; ++n) {
        r = r.d(true);
    }
    return r;
}

SphereFunction SphereFunction::conj() const
{
    std::vector<RationalTerm> out = terms_;
    for (auto& t : out) {
        t.c = std::conj(t.c);
        std::swap(t.p, t.q);
    }
    return SphereFunction(std::move(out));
}

cd SphereFunction::operator()(cd z) const
{
    return evaluate({z})(0);
}

Eigen::VectorXcd SphereFunction::evaluate(const std::vector<cd>& pts) const
{
    int pmax = 0;
    int qmax = 0;
    int kmax = 0;
    for (const auto& t : terms_) {
        pmax = std::max(pmax, t.p);
        qmax = std::max(qmax, t.q);
        kmax = std::max(kmax, t.k);
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pts.size()));
    std::vector<cd> zp(static_cast<std::size_t>(pmax + 1));
    std::vector<cd> zq(static_cast<std::size_t>(qmax + 1));
    std::vector<double> sk(static_cast<std::size_t>(kmax + 1));
    for (std::size_t n = 0; n < pts.size(); ++n) {
        const cd z = pts[n];
        const double s = 1.0 / (1.0 + std::norm(z));
        zp[0] = zq[0] = 1.0;
        sk[0] = 1.0;
        for (int i = 1; i <= pmax; ++i) {
            zp[static_cast<std::size_t>(i)] = zp[static_cast<std::size_t>(i - 1)] * z;
        }
        for (int i = 1; i <= qmax; ++i) {
            zq[static_cast<std::size_t>(i)] = zq[static_cast<std::size_t>(i - 1)] * std::conj(z);
        }
        for (int i = 1; i <= kmax; ++i) {
            sk[static_cast<std::size_t>(i)] = sk[static_cast<std::size_t>(i - 1)] * s;
        }
        cd acc = 0;
        for (const auto& t : terms_) {
            acc += t.c * zp[static_cast<std::size_t>(t.p)] * zq[static_cast<std::size_t>(t.q)] *
                   sk[static_cast<std::size_t>(t.k)];
        }
        out(static_cast<Eigen::Index>(n)) = acc;
    }
    return out;
}

Jet SphereFunction::taylor(cd z0, int order) const
{
    const Jet zj = Jet::variable(1, order, z(0)) + z0;
    const Jet zbj = Jet::variable(1, order, zbar(0)) + std::conj(z0);
    const Jet sinv = inverse(1.0 + zj * zbj);
    Jet out(1, order);
    std::map<int, Jet> zp;
    std::map<int, Jet> zq;
    std::map<int, Jet> sk;
    auto power = [](std::map<int, Jet>& cache, const Jet& x, int n) -> const Jet& {
        auto it = cache.find(n);
        if (it == cache.end()) {
            it = cache.emplace(n, pow(x, n)).first;
        }
        return it->second;
    };
    for (const auto& t : terms_) {
        out += power(zp, zj, t.p) * power(zq, zbj, t.q) * power(sk, sinv, t.k) * t.c;
    }
    return out;
}

SphereFunction& SphereFunction::operator+=(const SphereFunction& o)
{
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    simplify();
    return *this;
}

SphereFunction& SphereFunction::operator*=(cd s)
{
    for (auto& t : terms_) {
        t.c *= s;
    }
    simplify();
    return *this;
}

SphereFunction operator*(const SphereFunction& a, const SphereFunction& b)
{
    std::vector<RationalTerm> out;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            out.push_back({x.c * y.c, x.p + y.p, x.q + y.q, x.k + y.k});
        }
    }
    return SphereFunction(std::move(out));
}

// ---- grid ----

double QuadratureGrid::volume() const
{
    double v = 0;
    for (double w : weight) {
        v += w;
    }
    return v;
}

QuadratureGrid build_grid(int n_radial, int n_angular)
{
    if (n_radial < 4 || n_angular < 4) {
        throw ShapeError("quadrature grid needs at least 4 radial and 4 angular nodes");
    }
    QuadratureGrid g;
    g.n_radial = n_radial;
    g.n_angular = n_angular;
    g.exactness = std::min(2 * n_radial - 1, n_angular - 1);

    // boost returns the nonnegative zeros in increasing order.
    const auto zeros = boost::math::legendre_p_zeros<double>(n_radial);
    std::vector<double> u;
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
        if (*it != 0.0) {
            u.push_back(-*it);
        }
    }
    for (double x : zeros) {
        u.push_back(x);
    }
    const double dtheta = 2.0 * std::numbers::pi / n_angular;
    for (double x : u) {
        const double dp = boost::math::legendre_p_prime(n_radial, x);
        const double wu = 2.0 / ((1.0 - x * x) * dp * dp);
        const double r = std::sqrt((1.0 + x) / (1.0 - x));
        for (int j = 0; j < n_angular; ++j) {
            const double th = dtheta * j;
            g.u.push_back(x);
            g.theta.push_back(th);
            g.z.push_back(std::polar(r, th));
            g.weight.push_back(wu * dtheta);
        }
    }
    return g;
}

QuadratureGrid default_grid(int basis_degree, bool perturbed)
{
    if (perturbed) {
        return build_grid(3 * basis_degree + 16, 6 * basis_degree + 24);
    }
    return build_grid(2 * basis_degree + 8, 4 * basis_degree + 8);
}

// ---- perturbation specs ----

std::string mode_name(PerturbationMode mode)
{
    switch (mode) {
    case PerturbationMode::round:
        return "round";
    case PerturbationMode::quadrupole:
        return "quad";
    case PerturbationMode::sectoral:
        return "sect";
    }
    return "round";
}

std::string to_string(const PerturbationSpec& spec)
{
    // shortest text that reads back to the same double
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, spec.eps).ptr;
    return "eps=" + std::string(buf, end) + ",mode=" + mode_name(spec.mode);
}

PerturbationSpec parse_perturbation(const std::string& text)
{
    PerturbationSpec spec;
    bool have_mode = false;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) {
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("perturbation entry '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "eps") {
            std::size_t used = 0;
            try {
                spec.eps = std::stod(val, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != val.size() || !std::isfinite(spec.eps)) {
                throw std::invalid_argument("eps must be a number, got '" + val + "'");
            }
        } else if (key == "mode") {
            if (val == "quad") {
                spec.mode = PerturbationMode::quadrupole;
            } else if (val == "sect") {
                spec.mode = PerturbationMode::sectoral;
            } else if (val == "round") {
                spec.mode = PerturbationMode::round;
            } else {
                throw std::invalid_argument("unknown mode '" + val + "' (quad, sect, round)");
            }
            have_mode = true;
        } else {
            throw std::invalid_argument("unknown perturbation key '" + key + "'");
        }
    }
    if (!have_mode && spec.eps != 0) {
        spec.mode = PerturbationMode::quadrupole;
    }
    return spec;
}

SphereFunction mode_function(PerturbationMode mode)
{
    switch (mode) {
    case PerturbationMode::round:
        return {};
    case PerturbationMode::quadrupole: {
        const SphereFunction u = SphereFunction::height();
        return (u * u * cd(3.0) - SphereFunction::constant(1.0)) * cd(0.5);
    }
    case PerturbationMode::sectoral:
        // sin^2(theta) cos(2 phi)
        return SphereFunction::term(2.0, 2, 0, 2) + SphereFunction::term(2.0, 0, 2, 2);
    }
    return {};
}

// ---- metric on the grid ----

Eigen::VectorXcd MetricOnGrid::log_g_derivative(int a, int b) const
{
    return jet_derivative(log_g, a, b);
}

Eigen::VectorXcd MetricOnGrid::f_derivative(int a, int b) const
{
    return jet_derivative(f, a, b);
}

MetricOnGrid perturb_metric(const QuadratureGrid& grid, const PerturbationSpec& spec,
                            VolumeNormalization normalization)
{
    MetricOnGrid m;
    m.spec = spec;
    m.normalization = normalization;
    m.potential = mode_function(spec.mode) * cd(spec.eps);
    const SphereFunction g0 = SphereFunction::term(2.0, 0, 0, 2);
    m.g_function = g0 + m.potential.derivative(1, 1);

    const Eigen::VectorXcd gv = m.g_function.evaluate(grid.z);
    const Eigen::VectorXcd g0v = g0.evaluate(grid.z);
    const auto n = static_cast<Eigen::Index>(grid.size());
    m.g.resize(n);
    m.omega.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double gi = gv(i).real();
        if (!(gi > 0)) {
            std::ostringstream os;
            os << "perturbed metric is not positive at node " << i << " (z = " << grid.z[static_cast<std::size_t>(i)]
               << ", g = " << gi << ") for " << to_string(spec);
            throw NotAMetricError(os.str());
        }
        m.g(i) = gi;
        m.omega(i) = grid.weight[static_cast<std::size_t>(i)] * gi / g0v(i).real();
    }

    // f = log g0 - log g - psi + c solves R - g = f_{z zbar} because R0 = g0.
    m.log_g.reserve(grid.size());
    m.f.reserve(grid.size());
    double relation = 0;
    WeightJet zero{Jet(1, kNodeJetOrder)};
    zero.f.set_real(true);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cd z0 = grid.z[i];
        const Jet h = log(m.g_function.taylor(z0, kNodeJetOrder));
        const Jet psi = m.potential.taylor(z0, kNodeJetOrder);
        Jet f = log(g0.taylor(z0, kNodeJetOrder)) - h - psi;
        f = real_part(f);
        m.log_g.push_back(h);
        m.f.push_back(f);

        // Independent path: Kahler potential jet, curvature, closed-form Ricci potential.
        const Jet zj = Jet::variable(1, kNodeJetOrder, z(0)) + z0;
        const Jet zbj = Jet::variable(1, kNodeJetOrder, zbar(0)) + std::conj(z0);
        Jet k0 = log(1.0 + zj * zbj) * cd(2.0);
        k0 = real_part(k0);
        const MetricJet mg0 = metric_from_potential(k0);
        const MetricJet mg = metric_from_potential(real_part(k0 + psi));
        const cd ric = curvature(mg).ricci(0, 0).value();
        relation = std::max(relation, std::abs(ric - mg.g(0, 0).value() - f.coeff({1, 1})));
        const WeightJet fk = ricci_potential_from_potentials(zero, real_part(psi), mg0, mg);
        relation = std::max(relation, std::abs(fk.f.coeff({1, 0}) - f.coeff({1, 0})));
    }
    m.relation_residual = relation;

    Eigen::VectorXd ef(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ef(i) = std::exp(m.f[static_cast<std::size_t>(i)].value().real());
    }
    const double target = normalization == VolumeNormalization::kahler_class ? m.omega.sum() : grid.volume();
    const double shift = std::log(target / m.omega.dot(ef));
    for (auto& f : m.f) {
        f += cd(shift);
    }
    m.weighted = m.omega.cwiseProduct(ef) * std::exp(shift);

    const Eigen::VectorXcd hzz = m.log_g_derivative(1, 1);
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        s += m.omega(i) * (-hzz(i).real() / m.g(i));
    }
    m.sbar = s / m.omega.sum();
    return m;
}

} // namespace fanolab::spectral
