#pragma once

#include <string>
#include <vector>

#include "cmscat/grid.hpp"
#include "cmscat/linalg.hpp"

namespace cmscat {

struct EigenPair {
    double lambda = 0.0;
    CVec phi;  // normalized so that <q, phi> = 2 pi i
    double detection_ratio = 0.0;
};

struct DiscreteSpectrum {
    std::vector<EigenPair> pairs;
    std::vector<std::string> warnings;
    double mass = 0.0;  // ||q||_2^2

    int count() const { return static_cast<int>(pairs.size()); }
    std::vector<double> lambdas() const;
    std::vector<double> ratios() const;
};

struct SpectrumOptions {
    double detect_threshold = 0.5;
    double warn_low = 0.25;
    double warn_high = 0.75;
    double degeneracy_tol = -1.0;  // negative: 1e-6 max(1, ||q||^2)
    double hermitian_tol = 1e-12;
};

// Galerkin truncation of L_q onto the modes 0 <= xi < N/2 dxi, with its
// full eigendecomposition and the mode coefficients of q.
struct LaxGalerkin {
    Grid grid;
    HermitianEigen eig;
    CVec q_modes;  // fft(q)[0 .. N/2)
};

// -i f' - q C_+(conj(q) f), projected onto the Hardy modes.
CVec apply_lax(const Grid& g, const CVec& q, const CVec& f);

CMat assemble_lax_matrix(const Grid& g, const CVec& q, double hermitian_tol = 1e-12);
LaxGalerkin lax_eigensystem(const Grid& g, const CVec& q, double hermitian_tol = 1e-12);

DiscreteSpectrum discrete_spectrum(const Grid& g, const CVec& q, const SpectrumOptions& opt = {});
DiscreteSpectrum discrete_spectrum(const LaxGalerkin& lg, const CVec& q, const SpectrumOptions& opt = {});

// Rescale phi so that <q, phi> = 2 pi i.
CVec normalize_eigenfunction(const Grid& g, const CVec& q, const CVec& phi);

// |<q, phi>|^2 / (2 pi ||phi||^2); equal to 1 for genuine eigenfunctions.
double detection_ratio(const Grid& g, const CVec& q, const CVec& phi);

// Samples of sum_a c_a e^{i xi_a (x + L)} for Hardy mode coefficients c.
CVec modes_to_grid(const Grid& g, const CVec& coeffs);
CVec grid_to_modes(const Grid& g, const CVec& f);

// (M - k)^{-1} applied to the mode coefficients of f, returned as samples.
CVec galerkin_resolvent(const LaxGalerkin& lg, cplx k, const CVec& f);

}  // namespace cmscat
