#pragma once

#include <string>
#include <vector>

#include "cmscat/grid.hpp"

namespace cmscat {

// s^{1/2} e^{i theta + i eta^2 s^2 t} q_eta(s (x - 2 eta s t) + y) with
// q_eta(x) = sqrt(2) e^{i eta x} / (x + i).
struct SolitonParams {
    double eta = 1.0;
    double scale = 1.0;
    double shift = 0.0;
    double theta = 0.0;
    double t = 0.0;
};

cplx q_eta(double eta, double x);

// Closed-form samples.
CVec soliton_samples(const SolitonParams& p, const Grid& g);
// Samples projected onto the Hardy modes. Slow 1/x decay makes the raw
// samples jump across the periodic seam; a warning reports the size.
HardyFunction soliton_q(const SolitonParams& p, const Grid& g, std::vector<std::string>* warnings = nullptr);

// m_e(x, lam +- 0i) = e^{i lam x}(x - i)/(x + i) for lam > eta, e^{i lam x} for 0 <= lam < eta.
CVec soliton_me(double eta, double lam, const Grid& g);
// m_0(x, k) = -q_eta / (k - eta).
CVec soliton_m0(double eta, cplx k, const Grid& g);

struct SolitonScattering {
    double beta = 0.0;
    double Gamma = 1.0;
    double lambda1 = 0.0;
    CVec phi1;  // -i q_eta
};
SolitonScattering soliton_scattering(double eta, const Grid& g);

}  // namespace cmscat
