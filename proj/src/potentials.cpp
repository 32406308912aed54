#include "cmscat/potentials.hpp"

#include <cmath>
#include <random>

#include "cmscat/errors.hpp"
#include "cmscat/soliton.hpp"

namespace cmscat {

namespace {

CVec scale_to_mass(const Grid& g, CVec q, double mass) {
    const double m = norm2(g, q);
    if (m == 0.0) return q;
    return q * std::sqrt(mass / m);
}

}  // namespace

CVec gaussian_frequency(const Grid& g, double center, double width, double mass, double x0) {
    if (!(width > 0.0)) throw ConfigError("gaussian_frequency width must be positive");
    CVec F = CVec::Zero(g.N());
    for (int m = 0; m < g.hardy_modes(); ++m) {
        const double xi = g.xi(m);
        const double d = (xi - center) / width;
        // basis e^{i xi (x + L)}; the phase recentres the packet at x0
        F[m] = std::exp(-0.5 * d * d) * std::exp(-kI * xi * (g.L() + x0));
    }
    return scale_to_mass(g, ifft(F), mass);
}

CVec rational_hardy(const Grid& g, double mass, double width, double x0, int power) {
    if (!(width > 0.0)) throw ConfigError("rational_hardy width must be positive");
    if (power < 1) throw ConfigError("rational_hardy power must be >= 1");
    CVec q(g.N());
    for (int i = 0; i < g.N(); ++i) {
        const cplx z = 1.0 - kI * (g.x(i) - x0) / width;
        q[i] = std::pow(z, -power);
    }
    return scale_to_mass(g, hardy_project(g, q), mass);
}

CVec random_hardy(const Grid& g, unsigned seed, double cutoff) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    // Random smooth spectrum times a Gaussian window in x keeps the result
    // localized and band-limited.
    CVec F = CVec::Zero(g.N());
    for (int m = 0; m < g.hardy_modes(); ++m) {
        const double xi = g.xi(m);
        if (xi > cutoff) break;
        F[m] = cplx(nd(rng), nd(rng));
    }
    CVec f = ifft(F);
    for (int i = 0; i < g.N(); ++i) f[i] *= std::exp(-0.5 * std::pow(g.x(i) / (0.15 * g.L()), 2));
    f = hardy_project(g, f);
    return f / norm_l2(g, f);
}

CVec gauge_shift(const Grid& g, const CVec& q, double a) {
    const double snapped = std::round(a / g.dxi()) * g.dxi();
    return plane_wave(g, snapped).cwiseProduct(q);
}

PotentialSpec potential_from_config(const Config& c) {
    PotentialSpec s;
    s.name = c.get_string("potential.name", s.name);
    s.eta = c.get_double("potential.eta", s.eta);
    s.scale = c.get_double("potential.scale", s.scale);
    s.shift = c.get_double("potential.shift", s.shift);
    s.theta = c.get_double("potential.theta", s.theta);
    s.center = c.get_double("potential.center", s.center);
    s.width = c.get_double("potential.width", s.width);
    s.mass = c.get_double("potential.mass", s.mass);
    s.x0 = c.get_double("potential.x0", s.x0);
    s.power = static_cast<int>(c.get_int("potential.power", s.power));
    s.path = c.get_string("potential.path", "");
    static const char* names[] = {"soliton", "gaussian_frequency", "rational_hardy", "zero", "file"};
    bool ok = false;
    for (const char* n : names) ok = ok || s.name == n;
    if (!ok) throw ConfigError("unknown builtin potential '" + s.name + "'");
    if (s.name == "file" && s.path.empty()) throw ConfigError("potential.path is required for file potentials");
    if (s.mass < 0.0) throw ConfigError("potential.mass must be nonnegative");
    return s;
}

HardyFunction make_potential(const Grid& g, const PotentialSpec& s, std::vector<std::string>* warnings) {
    if (s.name == "zero") return make_hardy(g, CVec::Zero(g.N()));
    if (s.name == "soliton") {
        SolitonParams p;
        p.eta = s.eta;
        p.scale = s.scale;
        p.shift = s.shift;
        p.theta = s.theta;
        return soliton_q(p, g, warnings);
    }
    if (s.name == "gaussian_frequency") return make_hardy(g, gaussian_frequency(g, s.center, s.width, s.mass, s.x0));
    if (s.name == "rational_hardy") return make_hardy(g, rational_hardy(g, s.mass, s.width, s.x0, s.power));
    if (s.name == "file") {
        GridFunction gf = read_grid_function_csv(s.path);
        if (!(gf.grid == g)) throw ConfigError("potential file grid does not match grid.L / grid.N");
        const double res = hardy_residual(g, gf.f);
        if (warnings && res > 1e-10)
            warnings->push_back("potential file has negative-frequency content " + format_double(res) +
                                "; it was projected");
        return make_hardy(g, gf.f);
    }
    throw ConfigError("unknown builtin potential '" + s.name + "'");
}

}  // namespace cmscat
