#pragma once

#include <string>
#include <vector>

#include "delone/dyadic.hpp"
#include "delone/lattice.hpp"
#include "delone/psi.hpp"

namespace delone {

using RealPoint = std::vector<Dyadic>;

// Point configurations placed in a unit cell according to Psi.
struct MarkerSets {
    int d = 2;
    std::vector<RealPoint> t1;
    std::vector<RealPoint> t2;

    // T_1 = {1/2}^d, T_2 = {1/4, 3/4} x {1/2}^{d-1}.
    static MarkerSets standard(int d);
    // Throws ConfigError unless every point is strictly inside the open cell
    // and no set repeats a point.
    static MarkerSets custom(int d, std::vector<RealPoint> t1, std::vector<RealPoint> t2);

    const std::vector<RealPoint>& of(int value) const { return value == 1 ? t1 : t2; }
    void validate() const;
};

struct PointWindow {
    std::vector<RealPoint> points;  // lexicographic
    Box window;
    std::string hash;
};

PointWindow points_in_window(const PsiField& field, const Box& window,
                             const MarkerSets& markers);
inline PointWindow points_in_window(const PsiField& field, const Box& window) {
    return points_in_window(field, window, MarkerSets::standard(field.d()));
}

struct DeloneConstants {
    Dyadic separation_sq;       // exact squared minimum distance
    Dyadic covering_radius_sq;  // exact squared max probe-to-nearest distance
    double separation = 0;
    double covering_radius = 0;
    long long interior_points = 0;
    long long probes = 0;
};

// Statistics over the window shrunk by `margin` on each side; margin^2 >= d.
DeloneConstants delone_constants(const PointWindow& pw, const Dyadic& margin);

void write_points_csv(const PointWindow& pw, const std::string& path);
std::string points_csv(const PointWindow& pw);
// JSON sidecar: hashes, window bounds, count.
std::string points_metadata(const PointWindow& pw, const PsiField& field);

}  // namespace delone
