#pragma once

#include "cmscat/scattering.hpp"

namespace cmscat {

struct TraceReport {
    int order = 0;             // -1 for resolvent checks
    cplx k = 0.0;              // resolvent checks only
    cplx lhs = 0.0;
    cplx rhs_continuum = 0.0;
    cplx rhs_point = 0.0;
    double closure_error = 0.0;
    double imag_residue = 0.0;
};

// int |q|^2 against (1/2 pi) int |beta|^2 dlam + 2 pi N.
TraceReport trace_first(const Grid& g, const CVec& q, const ScatteringData& data);

// -int conj(q) c_{n+1} against (1/2 pi) int |beta|^2 lam^n dlam + 2 pi sum lam_j^n.
TraceReport trace_higher(const Grid& g, const CVec& q, const ScatteringData& data, int n,
                         double hygiene_tol = 1e-8);

// <L_q^n q, q> computed by repeated application of L_q.
cplx lax_moment(const Grid& g, const CVec& q, int n);
// Closed forms: n = 1 int conj(q)(-i q') - |q|^4 / 2, n = 2 int |-i q' - q C_+|q|^2|^2.
double explicit_moment(const Grid& g, const CVec& q, int n);

// int conj(q) m_0(k) against (1/2 pi) int |beta|^2/(lam - k) dlam + 2 pi sum 1/(lam_j - k).
TraceReport resolvent_trace_check(const Grid& g, const CVec& q, const ScatteringData& data, cplx k,
                                  const JostOptions& opt = {});
TraceReport resolvent_trace_from_m0(const Grid& g, const CVec& q, const ScatteringData& data, cplx k,
                                    const CVec& m0);

struct SokhotskiCheck {
    double lambda = 0.0;
    cplx lhs = 0.0;   // int conj(q) m_0(lam - 0i)
    cplx rhs = 0.0;   // -i C_-(|beta|^2)(lam) + 2 pi sum 1/(lam_j - lam)
    double relative_error = 0.0;
};
// Needs the sweep to keep m_0(lam - 0i). C_- acts on |beta|^2 extended by
// zero to lam < 0, on a periodic lambda grid of the sweep spacing.
SokhotskiCheck sokhotski_check(const ScatteringData& data, const Grid& g, const CVec& q, size_t index);

double closure(cplx lhs, cplx rhs_c, cplx rhs_p);

}  // namespace cmscat
