#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmscat/jost_solver.hpp"
#include "cmscat/lax_spectrum.hpp"

namespace cmscat {

struct BetaResult {
    cplx beta;         // from i conj(beta) = int conj(q) m_e(lam - 0i); authoritative
    cplx beta_m0;      // from i int q (C_+ conj(q) m_0(lam + 0i) + 1) e^{-i lam y}
    double discrepancy = 0.0;  // |beta - beta_m0|
};

// Gamma = 1 + i int e^{-i lam y} q C_+(conj(q) m_e(lam + 0i)).
cplx gamma_from_me(const Grid& g, const CVec& q, double lam, const CVec& me_plus);
cplx beta_from_me(const Grid& g, const CVec& q, const CVec& me_minus);
cplx beta_from_m0(const Grid& g, const CVec& q, double lam, const CVec& m0_plus);

cplx gamma_matrix(const Grid& g, const CVec& q, double lam, const JostOptions& opt = {});
// Throws ConsistencyError when the two forms disagree by more than
// consistency_tol (1 + |beta|).
BetaResult beta(const Grid& g, const CVec& q, double lam, const JostOptions& opt = {},
                double consistency_tol = 1e-5);

struct SweepOptions {
    JostOptions jost;
    double consistency_tol = 1e-5;
    bool keep_me_minus = true;
    bool keep_me_plus = false;
    bool keep_m0 = false;   // m_0(lam +- 0i)
    bool extract_gammas = true;
    bool beta_only = false;  // skip Gamma and the m_0 cross-check
    double delta0 = -1.0;   // negative: 0.1 min spectral gap
};

struct ScatteringData {
    std::vector<double> lambda;
    std::vector<cplx> beta;
    std::vector<cplx> beta_m0;
    std::vector<cplx> Gamma;
    std::vector<bool> flagged;  // excluded or failed; values interpolated
    std::vector<std::string> errors;
    DiscreteSpectrum eigen;
    std::vector<cplx> gamma_consts;
    std::vector<CVec> me_minus, me_plus, m0_plus, m0_minus;
};

ScatteringData scattering_sweep(const Grid& g, const CVec& q, const std::vector<double>& lambda_grid,
                                const SweepOptions& opt = {});
// Same, reusing an eigensystem already computed for q.
ScatteringData scattering_sweep(const Grid& g, const CVec& q, const std::vector<double>& lambda_grid,
                                const LaxGalerkin& lg, const DiscreteSpectrum& spec, const SweepOptions& opt = {});

std::vector<double> uniform_lambda_grid(double lambda_max, double spacing);

// Distance from lam to the nearest other Galerkin eigenvalue.
double spectral_gap(const LaxGalerkin& lg, double lam);

struct GammaOptions {
    double delta0 = 0.1;
    int levels = 4;          // delta_m = delta0 2^{-m}, m < levels
    bool upper = true;       // k = lam_j + i delta (else lam_j - i delta)
    double divergence_tol = 1e-2;
};

struct GammaExtraction {
    cplx gamma;
    CVec residue;                 // lim (k - lam_j) m_0(k)
    double residue_error = 0.0;   // ||residue + i phi_j|| / ||phi_j||
    std::vector<cplx> estimates;  // gamma at each delta_m
};

// Laurent data at lam_j. m_0 near the pole is the Galerkin resolvent
// (L_q - k)^{-1} q so the pole sits exactly at the computed eigenvalue.
GammaExtraction extract_gamma(const Grid& g, const LaxGalerkin& lg, const DiscreteSpectrum& spec, int j,
                              const GammaOptions& opt = {});

}  // namespace cmscat
