#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace cmscat {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Uniform periodic grid on [-L, L) with x_i = -L + i dx.
// Frequencies are stored in FFT order: xi_m = pi m / L for m < N/2,
// pi (m - N) / L otherwise.
class Grid {
public:
    Grid() = default;
    Grid(double L, int N);

    double L() const { return L_; }
    int N() const { return N_; }
    double dx() const { return 2.0 * L_ / N_; }
    double dxi() const { return kPi / L_; }
    double x(int i) const { return -L_ + i * dx(); }
    double xi(int m) const { return (m < N_ / 2 ? m : m - N_) * dxi(); }
    int hardy_modes() const { return N_ / 2; }

    RVec xs() const;
    RVec freqs() const;

    bool operator==(const Grid& o) const { return L_ == o.L_ && N_ == o.N_; }

private:
    double L_ = 1.0;
    int N_ = 16;
};

Grid make_grid(double L, int N);

struct GridFunction {
    Grid grid;
    CVec f;
};

// Samples whose Fourier content sits on nonnegative frequencies.
struct HardyFunction {
    Grid grid;
    CVec f;
    double hardy_residual = 0.0;
};

// Unnormalized DFT and its inverse (the inverse carries the 1/N).
CVec fft(const CVec& f);
CVec ifft(const CVec& F);

// Continuum-normalized transform (1/sqrt(2 pi)) int e^{-i xi x} f dx,
// sampled at grid().freqs() in FFT order.
CVec fourier_forward(const Grid& g, const CVec& f);
CVec fourier_inverse(const Grid& g, const CVec& F);

// Cauchy-Szego projector. Negative modes are removed and the xi = 0 mode
// is split evenly between C_+ and C_-.
CVec cplus(const Grid& g, const CVec& f);
CVec cminus(const Grid& g, const CVec& f);
// Orthogonal projection onto the nonnegative modes (full weight at 0).
CVec hardy_project(const Grid& g, const CVec& f);
// Modes in (-lam, 0), with half weight at both endpoints, so that
// conj(e) C_+ (e f) = C_+ f + C_lam f for lattice-aligned lam.
CVec c_lambda(const Grid& g, const CVec& f, double lam);

HardyFunction cauchy_szego(const GridFunction& f);
HardyFunction make_hardy(const Grid& g, const CVec& f);

// Relative L2 energy on strictly negative modes.
double hardy_residual(const Grid& g, const CVec& f);

CVec derivative(const Grid& g, const CVec& f);

// Trapezoid inner product <f, h> = dx sum f conj(h).
cplx inner(const Grid& g, const CVec& f, const CVec& h);
double norm2(const Grid& g, const CVec& f);
double norm_l2(const Grid& g, const CVec& f);
cplx integrate(const Grid& g, const CVec& f);
double weighted_norm(const Grid& g, const CVec& f, double s);

// max(|f(x_0)|, |f(x_{N-1})|) relative to max |f|.
double boundary_magnitude(const CVec& f);

// Relative magnitude of the top eighth of Hardy modes.
double spectral_tail(const Grid& g, const CVec& f);

CVec plane_wave(const Grid& g, cplx k);

}  // namespace cmscat
