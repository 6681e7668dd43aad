#pragma once

#include "fanolab/spectral/global.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fanolab::spectral {

/// l(l+1)/2 for the i-th eigenvalue (0-based, with multiplicity) of the Fubini-Study
/// dbar-Laplacian on functions.
double fs_eigenvalue(int i);

struct AnalysisOptions {
    int basis_degree = 12;
    /// 0 picks default_grid.
    int n_radial = 0;
    int n_angular = 0;
    double cluster_tolerance = kClusterTolerance;
    VolumeNormalization normalization = VolumeNormalization::kahler_class;
    /// Eigenvalues compared against the closed form, and between functions and forms.
    int compare_count = 15;
    /// Random draws for the Hermitian form and (u, v) pairs for the moment map; 0 skips.
    int form_draws = 0;
    int pairing_draws = 0;
    std::uint64_t seed = 1;
};

/// Everything computed for one metric on CP^1.
struct Cp1Analysis {
    PerturbationSpec spec;
    AnalysisOptions options;
    int nodes = 0;
    double relation_residual = 0;
    double volume_defect = 0;
    SpectrumResult functions;
    SpectrumResult forms01;
    /// Only for the round metric: max |lambda_i - l(l+1)/2| over compare_count nonzero eigenvalues.
    std::optional<double> fs_error;
    /// max |lambda_i(forms) - lambda_{i+1}(functions)| over compare_count eigenvalues.
    double intertwining = 0;
    /// Smallest nonzero function eigenvalue and smallest (0,1) eigenvalue.
    double lambda1_functions = 0;
    double lambda1_forms = 0;
    /// Multiplicity of the function cluster at 1 (0 if there is none).
    int unit_multiplicity = 0;
    double holomorphy_max = 0;
    /// Same residual on the first cluster above 1, for contrast.
    double holomorphy_next = 0;
    double eigenform_max = 0;
    int zero_multiplicity = 0;
    double max_eigen_residual = 0;
    /// Hermitian form: min of <psi,psi>/||psi||^2 over the draws.
    std::optional<double> form_min_ratio;
    std::optional<double> pairing_max_residual;
    double seconds = 0;
};

Cp1Analysis analyze_cp1(const PerturbationSpec& spec, const AnalysisOptions& opt = {});

struct ConvergencePoint {
    int N = 0;
    double error = 0;
};

/// Error of the first `count` eigenvalues against the closed form (round metric) or
/// against the largest N in the list (perturbed).
std::vector<ConvergencePoint> convergence_study(const PerturbationSpec& spec, const std::vector<int>& degrees,
                                                int count = 15);

/// index,value,cluster,residual
void write_spectrum_csv(std::ostream& os, const SpectrumResult& s);

/// Static log-scale plot of error against N.
std::string convergence_svg(const std::vector<ConvergencePoint>& points, const std::string& title);

} // namespace fanolab::spectral
