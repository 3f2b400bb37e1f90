// Built-in reversible systems:
//   rigid-rotation  z -> e^{i psi} z, reversor complex conjugation
//   twist-std       standard-map-like twist family on the cylinder lift,
//                   reflection reversor
//   nf-map          T = R_{2 pi p/q} o F, F the time-1 map of the resonant
//                   normal-form field, reversor complex conjugation
#ifndef REVLAB_BUILTIN_SYSTEMS_HPP
#define REVLAB_BUILTIN_SYSTEMS_HPP

#include <map>
#include <string>
#include <vector>

#include "revlab/planar_map.hpp"
#include "revlab/resonant_field.hpp"

namespace revlab {

struct BuiltinSpec {
    std::string name;
    std::map<std::string, double> params;  // scalar parameters by key
    std::vector<double> psi;               // Psi coefficients (nf-map only)
};

// Known names: "rigid-rotation", "twist-std", "nf-map". Unknown names or
// parameters are rejected with a validation_error.
ReversibleSystem make_builtin(const BuiltinSpec& spec);

// Convenience constructors used throughout the tests.
ReversibleSystem make_rigid_rotation(double psi);
ReversibleSystem make_twist_std(double k, double twist = 1.0);
ReversibleSystem make_nf_map(const ResonantParams& params, double integrator_tol = 1e-12,
                             double guard_radius = 1.0);

}  // namespace revlab

#endif
