#include <doctest.h>

#include <cmath>
#include <random>

#include "cmscat/errors.hpp"
#include "cmscat/free_resolvent.hpp"
#include "cmscat/linalg.hpp"
#include "cmscat/potentials.hpp"

using namespace cmscat;

namespace {

double sup(const CVec& v) { return v.cwiseAbs().maxCoeff(); }

cplx window(double mu, double y) { return std::exp(kI * mu * y - y * y / 4.0); }

CVec windowed(const Grid& g, double mu) {
    CVec f(g.N());
    for (int i = 0; i < g.N(); ++i) f[i] = window(mu, g.x(i));
    return f;
}

// Composite Simpson quadrature of the resolvent kernel at one point,
// evaluating the integrand analytically. Upper: i int_{-L}^{x}; lower:
// -i int_{x}^{L}.
cplx r0_oracle(double L, cplx k, bool upper, double mu, double x) {
    const double a = upper ? -L : x, b = upper ? x : L;
    const int M = 4000;
    const double h = (b - a) / M;
    cplx s = 0.0;
    for (int j = 0; j <= M; ++j) {
        const double y = a + j * h;
        const double w = (j == 0 || j == M) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        s += w * std::exp(kI * k * (x - y)) * window(mu, y);
    }
    return (upper ? kI : -kI) * s * h / 3.0;
}

// Dense matrices assembled from explicit exponential sums.
CMat dense_cplus(const Grid& g) {
    const int N = g.N();
    CMat C = CMat::Zero(N, N);
    for (int m = 0; m < N / 2; ++m) {
        const double w = m == 0 ? 0.5 : 1.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) C(i, j) += w * std::exp(kI * (2 * kPi * m * (i - j) / N)) / double(N);
    }
    return C;
}

// Spectral cumulative integral from -L: drop the mean, integrate each mode
// as e^{i xi x}/(i xi), add the mean times (x + L) and pin the value at -L.
CMat dense_cumulative(const Grid& g) {
    const int N = g.N();
    CMat A = CMat::Zero(N, N);
    for (int j = 0; j < N; ++j) {
        for (int m = 0; m < N; ++m) {
            if (m == 0 || m == N / 2) continue;
            const double xi = g.xi(m);
            for (int i = 0; i < N; ++i)
                A(i, j) += (std::exp(kI * xi * (g.x(i) - g.x(j))) - std::exp(kI * xi * (g.x(0) - g.x(j)))) /
                           (kI * xi) * g.dx() / (2.0 * g.L());
        }
        for (int i = 0; i < N; ++i) A(i, j) += (g.x(i) + g.L()) * g.dx() / (2.0 * g.L());
    }
    return A;
}

CMat dense_r0_upper(const Grid& g, cplx k) {
    const int N = g.N();
    CMat D = dense_cumulative(g);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) D(i, j) *= kI * std::exp(kI * k * (g.x(i) - g.x(j)));
    return D;
}

}  // namespace

TEST_CASE("apply_R0 trivial and validation") {
    const Grid g(20.0, 256);
    const CVec z = CVec::Zero(g.N());
    CHECK(sup(apply_R0(g, SpectralParam::axis(1.0, Side::Upper), z).f) == 0.0);
    CHECK_THROWS_AS(SpectralParam::off(cplx(1.0, 0.0)), ContractError);
    CHECK_THROWS_AS(SpectralParam::off(cplx(NAN, 1.0)), ContractError);
    CHECK_NOTHROW(SpectralParam::off(cplx(-1.0, 0.0)));
    CHECK(parse_side("+0i") == Side::Upper);
    CHECK_THROWS_AS(parse_side("sideways"), ConfigError);
}

TEST_CASE("apply_R0 against brute-force quadrature") {
    const Grid g(20.0, 256);
    const double mu = 1.3;
    const CVec f = windowed(g, mu);
    for (auto [k, side] : {std::pair{cplx(0.7, 0.0), Side::Upper}, std::pair{cplx(0.7, 0.0), Side::Lower},
                           std::pair{cplx(-0.4, 0.05), Side::OffAxis}, std::pair{cplx(2.0, -0.05), Side::OffAxis},
                           std::pair{cplx(0.5, 2.0), Side::OffAxis}}) {
        const SpectralParam p = side == Side::OffAxis ? SpectralParam::off(k) : SpectralParam::axis(k.real(), side);
        const CVec r = apply_R0(g, p, f).f;
        const bool upper = p.kernel_side() == Side::Upper;
        double err = 0.0;
        for (int i = 0; i < g.N(); i += 8) err = std::max(err, std::abs(r[i] - r0_oracle(g.L(), k, upper, mu, g.x(i))));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("jump across the spectrum") {
    const Grid g(20.0, 256);
    const CVec f = hardy_project(g, windowed(g, 2.0));
    const double lam = 1.5;
    const CVec d = apply_R0(g, SpectralParam::axis(lam, Side::Upper), f).f -
                   apply_R0(g, SpectralParam::axis(lam, Side::Lower), f).f;
    const cplx c = integrate(g, plane_wave(g, -lam).cwiseProduct(f));
    CHECK(sup(d - kI * c * plane_wave(g, lam)) < 1e-12 * sup(d));
}

TEST_CASE("resolvent identity and boundedness") {
    const Grid g(20.0, 512);
    const CVec f = windowed(g, 1.0);
    const cplx k(1.0, 2.0);  // R_0 f decays on both sides, so the spectral derivative applies
    const CVec r = apply_R0(g, SpectralParam::off(k), f).f;
    const CVec res = (-kI * derivative(g, r) - k * r) - f;
    CHECK(sup(res) < 1e-6 * sup(f));

    // the bound is attained at lam = mu, so allow round-off
    const double l1 = g.dx() * f.cwiseAbs().sum() * (1.0 + 1e-12);
    for (double lam : {0.0, 1.0, 5.0}) {
        CHECK(sup(apply_R0(g, SpectralParam::axis(lam, Side::Upper), f).f) <= l1);
        CHECK(sup(apply_R0(g, SpectralParam::axis(lam, Side::Lower), f).f) <= l1);
    }
}

TEST_CASE("apply_Tk against dense assembly") {
    const Grid g(10.0, 128);
    const CVec q = gaussian_frequency(g, 1.5, 0.6, 2.0);
    CVec m(g.N());
    for (int i = 0; i < g.N(); ++i) m[i] = std::exp(-g.x(i) * g.x(i) / 6.0) * cplx(1.0, 0.2 * g.x(i));
    const CMat C = dense_cplus(g);
    for (double lam : {0.0, 0.9}) {
        const cplx k(lam, 0.0);
        const CMat T = dense_r0_upper(g, k) * q.asDiagonal() * C * q.conjugate().asDiagonal();
        const CVec ref = T * m;
        const CVec got = apply_Tk(g, SpectralParam::axis(lam, Side::Upper), q, m);
        CHECK(sup(got - ref) < 1e-11 * (1.0 + sup(ref)));
    }
    CHECK(sup(apply_Tk(g, SpectralParam::axis(1.0, Side::Upper), q, CVec::Zero(g.N()))) == 0.0);
    CHECK(sup(apply_Tk(g, SpectralParam::axis(1.0, Side::Upper), CVec::Zero(g.N()), m)) == 0.0);
}

TEST_CASE("split T = S - T^-") {
    const Grid g(20.0, 512);
    const CVec q = gaussian_frequency(g, 2.0, 0.5, kPi);
    const CVec m = random_hardy(g, 11);
    for (const SpectralParam& p : {SpectralParam::axis(1.0, Side::Upper), SpectralParam::axis(2.5, Side::Lower),
                                   SpectralParam::off(cplx(0.3, 1.0))}) {
        const CVec T = apply_Tk(g, p, q, m);
        const CVec d = apply_Sk(g, p, q, m) - apply_Tk_minus(g, p, q, m);
        CHECK(sup(T - d) < 1e-12 * (1.0 + sup(T)));
    }
}

TEST_CASE("T^- decays at high energy") {
    const Grid g(30.0, 2048);
    const CVec q = gaussian_frequency(g, 2.0, 0.5, kPi);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<double> norms;
    for (double lam : {10.0, 40.0, 160.0}) {
        const SpectralParam p = SpectralParam::axis(lam, Side::Upper);
        double best = 0.0;
        for (int s = 0; s < 6; ++s) {
            CVec m(g.N());
            for (int i = 0; i < g.N(); ++i) m[i] = cplx(nd(rng), nd(rng));
            m = hardy_project(g, m);
            best = std::max(best, norm_l2(g, apply_Tk_minus(g, p, q, m)) / norm_l2(g, m));
        }
        norms.push_back(best);
    }
    CHECK(norms[1] < norms[0]);
    CHECK(norms[2] < norms[1]);
}

TEST_CASE("commutator identity for the shifted projector") {
    const Grid g(20.0, 512);
    CVec f(g.N());
    for (int i = 0; i < g.N(); ++i) f[i] = std::exp(-g.x(i) * g.x(i) / 5.0) * cplx(std::cos(3 * g.x(i)), 1.0);
    for (int n : {1, 7, 30}) {
        const double lam = n * g.dxi();
        const CVec e = plane_wave(g, lam);
        const CVec lhs = e.conjugate().cwiseProduct(cplus(g, e.cwiseProduct(f)));
        CHECK(sup(lhs - cplus(g, f) - c_lambda(g, f, lam)) < 1e-13 * sup(f));
        CHECK(sup(lhs - shifted_cplus(g, f, lam)) < 1e-13 * sup(f));
    }
}
