#ifndef CFS_GEOMETRY_HPP
#define CFS_GEOMETRY_HPP

#include <iosfwd>
#include <vector>

#include "cfs/operators.hpp"

namespace cfs {

/// Coordinates of the projected operator pi_x y pi_x in the descending
/// eigenbasis of the reference point x: block = (y0 + y.sigma)/2.
struct SpinProjection {
    double y0 = 0.0, y1 = 0.0, y2 = 0.0, y3 = 0.0;
    double ref_tau = 0.0;  // spectral gap nu+ - nu- of the reference
};

/// Projection of y onto the two-dimensional spin space of x (n = 1, any f).
/// Throws DegenerateImageError when the choice of the image of x is
/// ambiguous (|nu-| below tolerance with f > 2) and NotSpinOneError for n != 1.
SpinProjection spin_projection(const OperatorPoint& x, const OperatorPoint& y);

/// Causal class from the cone inequality: spacelike iff
/// (tau^2 - 1)(y1^2 + y2^2) > (y3 + y0 tau)^2, lightlike at equality within
/// tolerance. The all-zero projection defers to the spectral rule (spacelike).
CausalClass cone_classify(const SpinProjection& proj);

/// One row of a projected spacetime plot.
struct PlotRow {
    int point_index = 0;
    double hat_y0 = 0.0;  // y3 + y0 tau
    double hat_r = 0.0;   // sqrt(tau^2 - 1) sqrt(y1^2 + y2^2)
    CausalClass causal_class = CausalClass::Spacelike;
    double weight = 0.0;
    bool is_reference = false;
    bool singular = false;  // rescaling denominator |hat_y0| below 1e-12
};

/// Projected spacetime plot data relative to config.points[ref_index].
/// When rescale is set, both coordinates are divided by |hat_y0|^exponent;
/// rows with |hat_y0| < 1e-12 keep their raw values and carry the singular
/// flag instead.
std::vector<PlotRow> plot_rows(const Configuration& config, int ref_index, bool rescale,
                               double exponent = 1.5);

/// Delimited text with the frozen header
/// "index hat_y0 hat_r class weight is_reference singular".
void write_plot_rows(std::ostream& out, const std::vector<PlotRow>& rows);

}  // namespace cfs

#endif  // CFS_GEOMETRY_HPP
