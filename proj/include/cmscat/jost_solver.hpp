#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmscat/free_resolvent.hpp"
#include "cmscat/grid.hpp"

namespace cmscat {

enum class SolverPath { Dense, Neumann, Gmres };

std::string path_name(SolverPath p);
SolverPath parse_path(const std::string& s);

struct JostOptions {
    double solve_tol = 1e-8;       // residual bound solve_tol (1 + ||rhs||_inf)
    double eig_exclusion = -1.0;   // negative: 4 pi / L
    std::vector<double> eigenvalues;  // centres of the exclusion zones
    std::optional<SolverPath> force_path;
    int dense_max_n = 1024;        // automatic dense selection only up to this N
    int dense_cap_n = 4096;        // hard cap for the dense path
    int neumann_max_terms = 200;
    double gmres_rtol = 1e-13;
    int gmres_restart = 200;
    int gmres_max_iter = 6000;
    double boundary_tol = 1e-8;
    unsigned seed = 7;

    double exclusion(const Grid& g) const { return eig_exclusion >= 0.0 ? eig_exclusion : 4.0 * kPi / g.L(); }
};

struct JostSolution {
    SpectralParam param;
    CVec m;
    SolverPath path = SolverPath::Gmres;
    double residual = 0.0;  // sup |(1 - T) m - rhs|
    int iterations = 0;
    bool boundary_ok = true;
};

// (1 - T_{lam +- 0i}) m = e^{i lam x}.
JostSolution solve_me(const Grid& g, const CVec& q, double lam, Side side, const JostOptions& opt = {});
// (1 - T_p) m = R_0(p) q.
JostSolution solve_m0(const Grid& g, const CVec& q, const SpectralParam& p, const JostOptions& opt = {});

SolverPath solve_strategy(const Grid& g, const CVec& q, const SpectralParam& p, const JostOptions& opt = {});

// c_1 = -q, c_{n+1} = (-i d/dx - q C_+ conj(q)) c_n.
std::vector<CVec> c_sequence(const Grid& g, const CVec& q, int n_max, std::vector<std::string>* warnings = nullptr);

// Sum_{n <= M} c_n / k^n.
CVec c_expansion(const std::vector<CVec>& c, cplx k, int M);

}  // namespace cmscat
