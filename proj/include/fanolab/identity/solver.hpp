#pragma once

#include "fanolab/kahler/tensor.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fanolab {

/// A constraint r(x) = 0 on a tensor of jets, affine in the top-degree coefficients of x.
struct JetConstraint {
    std::string name;
    std::function<TensorJet(const TensorJet&)> residual;
    /// Number of derivatives r takes of x: degree-e coefficients of r involve x up to degree e + derivs.
    int derivs = 0;
    /// r must vanish through this jet order; negative disables the constraint.
    int through = -1;
};

/// Which coefficients the solver may change: (component, monomial index, t-degree).
using UnknownMask = std::function<bool(std::size_t, int, int)>;

/// Projects x degree by degree onto the affine set where every constraint holds.
///
/// At degree d the degree-d coefficients allowed by the mask are moved by the
/// smallest real-linear correction that zeroes the residual coefficients of
/// degree d - derivs. Throws InfeasibleError naming d when the projected
/// residual stays above tol.
TensorJet project_constraints(TensorJet x, const std::vector<JetConstraint>& constraints, const UnknownMask& mask,
                              double tol = 1e-12);

/// Largest coefficient of degree <= through in r(x).
double constraint_residual(const TensorJet& x, const JetConstraint& c);

} // namespace fanolab
