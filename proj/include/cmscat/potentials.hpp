#pragma once

#include <string>
#include <vector>

#include "cmscat/grid.hpp"
#include "cmscat/io.hpp"

namespace cmscat {

// Hardy q with Fourier transform exp(-(xi - center)^2 / (2 width^2)) on
// xi >= 0, centred at x = x0 and scaled to the requested mass ||q||^2.
CVec gaussian_frequency(const Grid& g, double center, double width, double mass, double x0 = 0.0);

// A / (1 - i (x - x0) / w)^p scaled to the requested mass. Its transform is
// proportional to xi^{p-1} e^{-w xi} on xi >= 0.
CVec rational_hardy(const Grid& g, double mass, double width = 1.0, double x0 = 0.0, int power = 2);

// Smooth random Hardy function: Gaussian-windowed random modes below
// cutoff, unit L2 norm, reproducible from the seed.
CVec random_hardy(const Grid& g, unsigned seed, double cutoff = 4.0);

// e^{i a x} q; a is snapped to the frequency lattice.
CVec gauge_shift(const Grid& g, const CVec& q, double a);

struct PotentialSpec {
    std::string name = "zero";  // soliton | gaussian_frequency | rational_hardy | zero | file
    double eta = 1.0;
    double scale = 1.0;
    double shift = 0.0;
    double theta = 0.0;
    double center = 2.0;
    double width = 0.5;
    double mass = 3.14159265358979323846;
    double x0 = 0.0;
    int power = 2;  // rational_hardy only
    std::string path;
};

PotentialSpec potential_from_config(const Config& c);
// Builds the potential on g and projects it onto the Hardy modes.
HardyFunction make_potential(const Grid& g, const PotentialSpec& s, std::vector<std::string>* warnings = nullptr);

}  // namespace cmscat
