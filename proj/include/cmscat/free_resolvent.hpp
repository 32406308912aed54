#pragma once

#include <string>

#include "cmscat/grid.hpp"

namespace cmscat {

enum class Side { Upper, Lower, OffAxis };

std::string side_name(Side s);
Side parse_side(const std::string& s);

// A point of the closed upper/lower half planes glued along the spectrum:
// on [0, inf) the side records the boundary value lam +- 0i.
struct SpectralParam {
    cplx k;
    Side side;

    static SpectralParam axis(double lam, Side side);
    static SpectralParam off(cplx k);

    bool on_axis() const { return k.imag() == 0.0; }
    // Side actually used by the kernel (Upper for Im k > 0 and for the
    // unambiguous negative real axis, Lower for Im k < 0).
    Side kernel_side() const;
    void validate() const;
};

struct ResolventOutput {
    CVec f;
    bool boundary_warning = false;
};

// R_0(k) f with kernel i e^{ik(x-y)} 1_{y<x} (upper) or -i e^{ik(x-y)} 1_{y>x} (lower).
ResolventOutput apply_R0(const Grid& g, const SpectralParam& p, const CVec& f, double boundary_tol = 1e-8);

// Unchecked kernel used inside solvers.
CVec r0(const Grid& g, cplx k, Side side, const CVec& f);

// int_{-L}^{x} h dy, spectrally accurate for h negligible at the boundary.
CVec cumulative_integral(const Grid& g, const CVec& h);

CVec apply_Tk(const Grid& g, const SpectralParam& p, const CVec& q, const CVec& m);
CVec apply_Tk_minus(const Grid& g, const SpectralParam& p, const CVec& q, const CVec& m);
// S_k m = R_0(k) |q|^2 m, so that T_k = S_k - T^-_k.
CVec apply_Sk(const Grid& g, const SpectralParam& p, const CVec& q, const CVec& m);

// Multiplier form of conj(e_lam) C_+ e_lam: weight 1 on modes > -lam and
// 1/2 on a lattice mode equal to -lam.
CVec shifted_cplus(const Grid& g, const CVec& f, double lam);

// On-axis operator in the gauge m = e^{i lam x} n:
// K n = +- i int q P_lam(conj(q) n), integrated from -L (upper) or to L (lower).
CVec gauged_K(const Grid& g, double lam, Side side, const CVec& q, const CVec& n);

}  // namespace cmscat
