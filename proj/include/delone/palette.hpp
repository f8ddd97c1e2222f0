#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "delone/bignum.hpp"
#include "delone/density.hpp"
#include "delone/grid.hpp"
#include "delone/lattice.hpp"
#include "delone/schedule.hpp"

namespace delone {

// Colour j of the palette at level n.
struct ColourRef {
    int level = 1;
    long long index = 1;
};

// One cube of the 2^{p_{n-2}}-partition of Q_n = {0..2^{p_{n-1}}-1}^d.
struct TileAddress {
    int level = 2;
    LatticePoint tile;  // 0-based tile multi-index
    bool strip = false;
    Int ordinal = 0;    // 1-based position among kept tiles; 0 for strip tiles
};

struct PaletteOptions {
    Int materialize_cap = Int{1} << 26;  // cells per materialized colour
    Int alpha_budget = Int{1} << 20;     // tiles per full alpha sweep
    int threads = 1;
};

struct GoodnessReport {
    int level = 0;
    std::string mode;  // "direct" or "descent"
    bool condition_a = true;
    bool condition_b = true;
    long long tiles_checked = 0;
    long long points_checked = 0;
    std::vector<std::string> failures;

    bool pass() const { return condition_a && condition_b; }
};

// Builds and evaluates the good sequence of palettes for one schedule and one
// density. Colours are evaluated lazily by descent; alpha choices and shade
// numerators are memoized. Levels 1..n_max carry every colour; level n_max+1
// carries colour 1 only (it is fixed by the lower levels, and Psi needs it).
class PaletteEngine {
public:
    PaletteEngine(LevelSchedule schedule, DensityFn density, PaletteOptions options = {});

    const LevelSchedule& schedule() const { return sched_; }
    const DensityFn& density() const { return density_; }
    const PaletteOptions& options() const { return opts_; }
    std::string hash() const;  // schedule + density

    int d() const { return sched_.d(); }
    int top_level() const { return sched_.n_max() + 1; }
    long long colours(int n) const;  // number of colours available at level n
    Int domain_side(int n) const;    // 2^{p_{n-1}}

    // Lexicographic D-tuples over [c_n]; i is 1-based.
    std::vector<long long> a_tuple(int n, Int i) const;
    long long a_component(int n, Int i, int k) const;

    TileAddress tile_of(int n, const LatticePoint& x) const;
    TileAddress tile_at(int n, const LatticePoint& multi_index) const;
    Int kept_tiles(int n) const;
    Box tile_box(const TileAddress& tile) const;  // rescaled into [0,1]^d
    CubicSet tile_cube(const TileAddress& tile) const;

    // M-vector sums and entries (colour i in [c_n - 1], ordinal k in [t_n]).
    Int m_target_sum(int n, long long i) const;
    long long m_entry(int n, long long i, Int k) const;

    long long alpha_for_tile(const TileAddress& tile);
    void precompute_alphas(int n);

    // Colour of level n-1 placed on `tile` inside colour j of level n.
    long long child_colour(long long j, const TileAddress& tile);
    bool materializable(int n) const;

    std::uint8_t eval_colour(ColourRef ref, const LatticePoint& x);
    static std::uint8_t base_colour(long long j);

    BigInt shade_sum(ColourRef ref);  // sum of the colour over Q_n
    Rational shade(ColourRef ref);
    BigInt strip_sum(int n);          // sum over the strip of any colour at level n

    // All colours of a level by direct construction (independent of descent).
    const std::vector<Grid>& materialize_level(int n);
    Grid materialize(ColourRef ref);

    GoodnessReport check_goodness(int n);
    GoodnessReport check_goodness_sampled(int n, long long samples, std::uint64_t seed);

    // Condition (A) and (B) on explicit grids; used for fault injection.
    static GoodnessReport check_goodness_grids(const LevelSchedule& sched, int n, const std::vector<Grid>& level,
                                               const std::vector<Grid>& previous);

private:
    struct LevelInfo {
        int n = 1;
        int tile_shift = 0;  // p_{n-2}
        int g = 0;           // p_{n-1} - p_{n-2}
        Int tile_side = 1;
        Int tiles_per_axis = 1;
        Int domain_side = 1;
        long long c_prev = 0;
        long long c_cur = 0;  // 0 at the top level (only colour 1 defined)
        Int strip_blocks = 0;
        Int strip_extent = 0;  // strip length in tiles along axis 1
        std::optional<Int> t;  // empty when it overflows
        bool stepped = false;  // greedy M-vectors in use
        Int h = 0;
        long long alpha_n = 0;
        long double gap_bound = 0;  // (prod_{l<n} h_l) / 2^{d p_{n-2}}
    };

    const LevelInfo& info(int n) const;
    void check_colour(ColourRef ref) const;
    Int kept_t(const LevelInfo& li) const;
    long double shade_value(int n, long long j);
    std::uint64_t memo_key(Int ordinal) const;

    LevelSchedule sched_;
    DensityFn density_;
    PaletteOptions opts_;
    std::vector<LevelInfo> levels_;  // index n, 1..top

    std::mutex mu_;
    std::vector<std::unordered_map<std::uint64_t, long long>> alpha_memo_;
    std::vector<bool> alpha_complete_;
    std::map<std::pair<int, long long>, BigInt> shade_memo_;
    std::map<int, std::vector<Grid>> grid_memo_;
};

}  // namespace delone
