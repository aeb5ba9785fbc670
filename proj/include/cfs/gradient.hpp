#ifndef CFS_GRADIENT_HPP
#define CFS_GRADIENT_HPP

#include "cfs/action.hpp"
#include "cfs/parametrize.hpp"

namespace cfs {

/// Value and analytic gradient of the causal action in unconstrained
/// coordinates. `smooth` is false when some pair sits within tolerance of a
/// causal-class boundary (a kink of the Lagrangian), where the returned
/// vector is only a one-sided subgradient.
struct ActionGradient {
    double action = 0.0;
    VectorR grad;
    bool smooth = true;
};

/// Action value alone (decode + causal_action composition).
double action_of_params(const UnconstrainedParams& params);

/// Analytic reverse-mode gradient with respect to the flat parameter vector.
/// At a Lagrangian kink the max(0, .) factor is differentiated as 0.
ActionGradient grad(const UnconstrainedParams& params);

/// Flat-vector entry points for the optimizer.
double action_value_flat(const VectorR& flat, const Shape& shape);
ActionGradient grad_flat(const VectorR& flat, const Shape& shape);

struct GradCheckReport {
    double max_rel_error = 0.0;
    int worst_index = -1;
    double step = 0.0;
    bool smooth = true;
};

/// Central-difference verification of grad, coordinate by coordinate.
GradCheckReport fd_check(const UnconstrainedParams& params, double step = 1e-5);

}  // namespace cfs

#endif  // CFS_GRADIENT_HPP
