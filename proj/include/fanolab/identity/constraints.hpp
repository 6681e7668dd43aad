#pragma once

#include "fanolab/identity/solver.hpp"
#include "fanolab/kahler/metric.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fanolab {

/// Hypotheses imposed on a Beltrami differential phi. Each entry is the jet
/// order through which the corresponding residual must vanish; -1 leaves it off.
struct ConstraintSet {
    /// dbar phi - (1/2)[phi, phi]
    int integrable = -1;
    /// phi contracted with omega
    int omega_compatible = -1;
    /// dbar*_f phi
    int gauge = -1;
    /// div_f phi
    int divergence_free = -1;
    /// R_{i jbar} - f_{i jbar} - g_{i jbar} at the base point; only order 0 is meaningful.
    int fano_relation = -1;
};

/// Random local data around the base point.
struct Background {
    Jet potential;
    MetricJet g;
    WeightJet f;
};

/// Engine seeded from (seed, stream) so independent draws from one seed never overlap.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform sample of the closed complex unit disc.
std::complex<double> disc_sample(std::mt19937_64& rng);

/// Random Kahler potential to `metric_order + 2` and real weight to `weight_order`.
/// g(0) is a random Hermitian positive matrix close to the identity.
Background random_background(std::uint64_t seed, int m, int metric_order, int weight_order);

/// f with its (1,1) Hessian at the base point replaced so that R_{i jbar}(0) = f_{i jbar}(0) + g_{i jbar}(0).
WeightJet fano_adjust_weight(const WeightJet& f, const MetricJet& g);

/// Coupled version: R(g_a)_{i jbar}(0) = (f_a)_{i jbar}(0) + sum_b (g_b)_{i jbar}(0) for every a.
std::vector<WeightJet> fano_adjust_weights(const std::vector<WeightJet>& f, const std::vector<MetricJet>& g);

/// max |R_{i jbar}(0) - f_{i jbar}(0) - target_{i jbar}(0)|, target = g when omitted.
double fano_defect(const WeightJet& f, const MetricJet& g);
double fano_defect(const WeightJet& f, const MetricJet& g, const JetMatrix& target);

/// The residual maps of the active constraints on a vector-valued (0,1)-form.
std::vector<JetConstraint> phi_constraints(const ConstraintSet& cs, const Connection& c);

/// Random vector-valued (0,1)-form of the given jet order meeting `cs`.
///
/// Coefficients start uniform in the unit disc and are projected degree by
/// degree onto the constraint set. Throws InfeasibleError with the failing
/// order. The Fano flag only checks the supplied weight.
VectorFormJet random_constrained_phi(std::uint64_t seed, int m, int order, const ConstraintSet& cs, const MetricJet& g,
                                     const WeightJet& f);

/// Largest active residual of phi for each constraint in `cs`, in the order of phi_constraints.
std::vector<double> constraint_residuals(const VectorFormJet& phi, const ConstraintSet& cs, const MetricJet& g,
                                         const WeightJet& f);

} // namespace fanolab
