#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delone/bignum.hpp"
#include "delone/delone_set.hpp"
#include "delone/grid.hpp"
#include "delone/psi.hpp"

namespace delone {

// a + b sqrt(d), compared exactly.
struct Surd {
    Rational a;
    Rational b;

    double value(int d) const;
};

int sign(const Surd& s, int d);
bool sqrt_le(const Rational& q, const Surd& s, int d);  // sqrt(q) <= s
bool sqrt_lt(const Rational& q, const Surd& s, int d);  // sqrt(q) < s

// z in Z^d with |z| < r.
std::vector<LatticePoint> lattice_ball(int d, const Surd& r);

// Psi over one cube, read-only once built; safe to share across threads.
struct PsiRaster {
    CubicSet box;
    Grid grid;

    bool covers(const LatticePoint& x) const { return box.contains(x); }
    std::uint8_t at(const LatticePoint& x) const;  // CoverageError outside
};

// The whole block s_N + R_1^{(N)}.
PsiRaster coverage_raster(const PsiField& field, int block);

struct Patch {
    LatticePoint center;
    Surd radius;
    std::vector<LatticePoint> offsets;  // lexicographic
    std::vector<std::uint8_t> values;

    bool operator==(const Patch& o) const { return offsets == o.offsets && values == o.values; }
};

struct PointPatch {
    RealPoint center;
    Rational radius;
    std::vector<RealPoint> points;  // translated to the origin, lexicographic
};

Patch extract_patch(const PsiField& field, const LatticePoint& center, const Surd& r);
Patch extract_patch(const PsiRaster& raster, const LatticePoint& center, const Surd& r);
PointPatch extract_patch(const PointWindow& pw, const RealPoint& center, const Rational& r);

// Lexicographically first w with B(w,r) inside B(y,R) and a matching patch.
// Only candidates whose patch lies in the readable blocks are searched.
std::optional<LatticePoint> find_patch_translate(const PsiField& field, const Patch& patch, const LatticePoint& y,
                                                 const Surd& R);
std::optional<LatticePoint> find_patch_translate(const PsiRaster& raster, const Patch& patch, const LatticePoint& y,
                                                 const Surd& R);

struct SampleSpec {
    int pairs = 64;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Report {
    std::string check;
    bool pass = true;
    double worst_slack = 0;  // smallest (bound - observed); negative on failure
    bool has_slack = false;
    std::vector<std::string> lines;
    std::vector<std::string> failures;
    std::vector<std::uint64_t> seeds;
    nlohmann::json data = nlohmann::json::object();

    void slack(double s);
    void fail(const std::string& what);
    nlohmann::json trailer() const;
    std::string text() const;  // lines, then "#json " + trailer
};

// Level n with 2^{p_{n-2}} < 2r <= 2^{p_{n-1}}, or 0.
int matching_level(const LevelSchedule& s, const Surd& r);

Report verify_mapping_repetitivity(const PsiField& field, int n, const Rational& r, const SampleSpec& spec);
Report verify_net_repetitivity(const PsiField& field, const std::optional<CubicSet>& window, const Rational& r,
                               const SampleSpec& spec);

struct EncodingOptions {
    bool exhaustive = true;
    long long samples = 4096;
    std::uint64_t seed = 1;
    double slack = 1e-6;
    int direct_tiles = 4;  // tiles whose sum is recounted cell by cell
};

Report encoding_report(PaletteEngine& engine, int n, const EncodingOptions& opts = {});
Report check_nesting(const PsiField& field);
Report verify_level_consistency(const PsiField& field, long long samples, std::uint64_t seed);
Report verify_partition_claim(const PsiField& field, int n, long long samples, std::uint64_t seed);
Report verify_colour_patches(const PsiField& field);
Report verify_goodness(PaletteEngine& engine, long long samples, std::uint64_t seed);

// Overall pass, worst slack and seeds over several reports.
nlohmann::json combine(const std::vector<Report>& reports);

}  // namespace delone
