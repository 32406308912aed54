#pragma once

#include <string>
#include <vector>

#include "cmscat/io.hpp"
#include "cmscat/scattering.hpp"

namespace cmscat {

// dq/dt = i q_xx + 2 q C_+ d/dx(|q|^2), projected onto the Hardy modes.
CVec cm_rhs(const Grid& g, const CVec& q);

struct EvolveOptions {
    int snapshot_every = 100;       // steps between logged snapshots
    double safety = 0.95;           // refuse ||q0||^2 >= 2 pi safety ...
    bool allow_supercritical = false;  // ... unless explicitly overridden
    double mass_tol = 1e-6;         // relative mass drift that aborts the run
    double hardy_tol = 1e-10;
    double cfl = 2.8;               // bound on dt * xi_max * 2 max|q|^2
    // scattering snapshots
    bool track_spectrum = false;
    std::vector<double> beta_lambdas;
    bool track_gamma = false;
    JostOptions jost;
};

struct Snapshot {
    double t = 0.0;
    CVec q;
    double mass = 0.0;
    double hamiltonian = 0.0;   // <L_q q, q>
    double moment2 = 0.0;       // <L_q^2 q, q>
    double projection = 0.0;    // largest Hardy re-projection since the previous snapshot
    std::vector<double> eigenvalues;
    std::vector<cplx> gammas;
    std::vector<cplx> betas;    // at EvolveOptions::beta_lambdas
    std::vector<cplx> Gammas;
};

struct Trajectory {
    Grid grid;
    double dt = 0.0;
    std::vector<double> beta_lambdas;
    std::vector<Snapshot> snapshots;
    std::vector<std::string> warnings;
};

// Integrating-factor RK4 on the nonnegative modes. Throws ConfigError when
// the mass threshold or CFL bound is violated at t = 0 and ContractError
// when mass drift exceeds the tolerance.
Trajectory evolve(const Grid& g, const CVec& q0, double T, double dt, const EvolveOptions& opt = {});

// Fills eigenvalues, gamma constants and beta samples for one snapshot.
void analyse_snapshot(const Grid& g, Snapshot& s, const EvolveOptions& opt);

struct EvolutionReport {
    double eigenvalue_drift = 0.0;
    double beta_modulus_drift = 0.0;              // max relative drift of |beta|
    std::vector<double> phase_slopes;             // fitted d arg(beta)/dt per lambda
    double phase_slope_error = 0.0;               // max |slope + lam^2| / lam^2
    std::vector<double> gamma_slopes;             // fitted d Re(gamma_j)/dt
    double gamma_slope_error = 0.0;               // max |slope + 2 lam_j| / |2 lam_j|
    double Gamma_drift = 0.0;
    double mass_drift = 0.0;                      // relative
    double hamiltonian_drift = 0.0;               // relative
    double moment2_drift = 0.0;                   // relative
};

EvolutionReport scattering_evolution_check(const Trajectory& traj);

// Writes manifest.json (times, logs, tolerances, extra) and one
// q_<index>.csv per snapshot into dir.
void save_trajectory(const Trajectory& traj, const std::string& dir, const json& extra = json::object());

// Least-squares slope of y against t.
double fit_slope(const std::vector<double>& t, const std::vector<double>& y);

// Location of max |q| refined by a parabola through the neighbours.
double peak_position(const Grid& g, const CVec& q);

}  // namespace cmscat
