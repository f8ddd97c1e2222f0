#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "delone/lattice.hpp"

namespace delone {

inline constexpr double kDensityLo = 4.0 / 3.0;
inline constexpr double kDensityHi = 5.0 / 3.0;

// A target density on [0,1]^d with values in [4/3, 5/3]. Piecewise-constant
// kinds on a dyadic grid are integrated exactly; the rest adaptively.
class DensityFn {
public:
    enum class Kind { Constant, Affine, Checkerboard, Oscillating, Table };

    static DensityFn constant(double value);
    // a + b * x_1, clipped to the admissible range.
    static DensityFn affine(double a, double b);
    // lo on cells of the 2^-depth grid with even index sum, hi on odd.
    static DensityFn checkerboard(int depth, double lo = kDensityLo, double hi = kDensityHi);
    // Superposed checkerboards at scales 1..depth with halving weights.
    static DensityFn oscillating(int depth);
    // Row-major values on the (2^depth)^d grid, first coordinate most significant.
    static DensityFn table(int dim, int depth, std::vector<double> values);

    static DensityFn from_json(const nlohmann::json& spec);
    static DensityFn load_table(const std::string& path);
    nlohmann::json to_json() const;
    std::string hash() const;

    Kind kind() const { return kind_; }
    bool exact_dyadic() const { return kind_ != Kind::Affine; }
    int depth() const { return depth_; }

    double eval(std::span<const double> x) const;
    double integrate_box(const Box& box, double tol = 1e-9) const;

    static constexpr long long kRefinementCap = 1LL << 24;

private:
    double raw(std::span<const double> x) const;
    double integrate_dyadic(std::span<const double> lo, std::span<const double> hi) const;
    double integrate_adaptive(std::span<const double> lo, std::span<const double> hi, double tol) const;

    Kind kind_ = Kind::Constant;
    int depth_ = 0;
    int table_dim_ = 0;
    std::vector<double> params_;
};

}  // namespace delone
