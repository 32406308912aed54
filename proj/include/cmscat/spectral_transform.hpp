#pragma once

#include <vector>

#include "cmscat/scattering.hpp"

namespace cmscat {

struct DistortedSpectrum {
    std::vector<double> lambda;
    CVec values;       // (Phi f)(lambda)
    CVec point_part;   // <f, phi_j> / ||phi_j||^2
};

// Trapezoid weights on an increasing (possibly nonuniform) grid.
RVec trapezoid_weights(const std::vector<double>& x);

// (Phi f)(lam) = (1/sqrt(2 pi)) int f conj(m_e(lam - 0i)), using the m_e
// family cached in the sweep.
DistortedSpectrum distorted_forward(const Grid& g, const ScatteringData& data, const CVec& f);

// Sum_j c_j phi_j + (1/sqrt(2 pi)) int (Phi f)(lam) m_e(lam - 0i) dlam.
CVec distorted_inverse(const Grid& g, const ScatteringData& data, const DistortedSpectrum& s);

// Phi^* applied to a sampled spectral function (continuum part only).
CVec distorted_adjoint(const Grid& g, const ScatteringData& data, const CVec& values);

struct PlancherelSplit {
    double norm_sq = 0.0;
    double continuum = 0.0;
    double point = 0.0;
    double relative_error = 0.0;
};
PlancherelSplit plancherel(const Grid& g, const DistortedSpectrum& s, const CVec& f, const ScatteringData& data);

struct Reconstruction {
    CVec q;
    double relative_error = 0.0;
    bool failed = false;  // relative_error > recon_tol
};

// q = Sum_j i phi_j - (i / 2 pi) int beta m_e(lam - 0i) dlam, using
// <q, phi_j> / ||phi_j||^2 = i for normalized eigenfunctions and
// beta = i sqrt(2 pi) (Phi q).
Reconstruction reconstruct_q(const Grid& g, const ScatteringData& data, const CVec& q_ref, double recon_tol = 2e-2);

}  // namespace cmscat
