#include "delone/palette.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace delone {

namespace {

std::string describe(const LatticePoint& p) {
    std::string s = "(";
    for (int i = 0; i < p.dim(); ++i) s += (i ? "," : "") + to_string(p[i]);
    return s + ")";
}

// Odometer over [c]^D in lexicographic order, last component fastest.
bool next_tuple(std::vector<long long>& t, long long c) {
    for (size_t k = t.size(); k-- > 0;) {
        if (++t[k] <= c) return true;
        t[k] = 1;
    }
    return false;
}

void copy_into(Grid& dst, const LatticePoint& base, const Grid& src) {
    for (size_t lin = 0; lin < src.cells(); ++lin) dst.at(base + src.point(lin)) = src.values[lin];
}

bool block_equals(const Grid& g, const LatticePoint& base, const Grid& pattern) {
    for (size_t lin = 0; lin < pattern.cells(); ++lin)
        if (g.at(base + pattern.point(lin)) != pattern.values[lin]) return false;
    return true;
}

long double to_ld(const BigInt& v) { return v.convert_to<long double>(); }

}  // namespace

PaletteEngine::PaletteEngine(LevelSchedule schedule, DensityFn density, PaletteOptions options)
    : sched_(std::move(schedule)), density_(std::move(density)), opts_(options) {
    require_valid(sched_);
    if (sched_.c(1) > 3) throw UsageError("the level-1 palette has at most 3 colours");
    const int top = top_level();
    const int d = sched_.d();
    levels_.resize(static_cast<size_t>(top) + 1);
    levels_[1].n = 1;
    levels_[1].c_cur = sched_.c(1);
    BigInt h_product = 1;
    bool products_ok = sched_.palette_mode();
    for (int n = 2; n <= top; ++n) {
        LevelInfo& li = levels_[static_cast<size_t>(n)];
        li.n = n;
        li.tile_shift = static_cast<int>(sched_.p(n - 2));
        li.g = static_cast<int>(sched_.p(n - 1) - sched_.p(n - 2));
        li.tile_side = pow2(li.tile_shift);
        li.tiles_per_axis = pow2(li.g);
        li.domain_side = pow2(sched_.p(n - 1));
        li.c_prev = sched_.c(n - 1);
        li.c_cur = n <= sched_.n_max() ? sched_.c(n) : 0;
        li.strip_blocks = checked_pow(li.c_prev, sched_.D());
        li.strip_extent = 2 * li.strip_blocks;
        try {
            li.t = checked_sub(checked_pow(li.tiles_per_axis, d), checked_mul(sched_.D(), li.strip_blocks));
        } catch (const CapacityError&) {
            li.t.reset();
        }
        if (li.t && li.c_prev >= 3 && li.c_cur >= 3) {
            DerivedLevel dl = derive_from(to_big(*li.t), li.c_prev, li.c_cur);
            li.stepped = true;
            li.h = static_cast<Int>(static_cast<long long>(dl.h));
            li.alpha_n = dl.alpha;
        }
        // Shade-gap bound uses h_1 .. h_{n-1}.
        li.gap_bound = products_ok ? std::ldexp(to_ld(h_product), -d * li.tile_shift) : -1.0L;
        if (li.stepped)
            h_product *= to_big(li.h);
        else
            products_ok = false;
    }
    alpha_memo_.resize(static_cast<size_t>(top) + 1);
    alpha_complete_.assign(static_cast<size_t>(top) + 1, false);
}

std::string PaletteEngine::hash() const {
    return fnv1a_hex(sched_.canonical() + "|" + density_.to_json().dump());
}

const PaletteEngine::LevelInfo& PaletteEngine::info(int n) const {
    if (n < 1 || n > top_level()) throw CapacityError("level " + std::to_string(n) + " is not built");
    return levels_[static_cast<size_t>(n)];
}

long long PaletteEngine::colours(int n) const {
    if (n >= 1 && n <= sched_.n_max()) return sched_.c(n);
    if (n == top_level()) return 1;
    throw CapacityError("level " + std::to_string(n) + " is not built");
}

Int PaletteEngine::domain_side(int n) const { return info(n).domain_side; }

void PaletteEngine::check_colour(ColourRef ref) const {
    long long c = colours(ref.level);
    if (ref.index < 1 || ref.index > c)
        throw RangeError("colour " + std::to_string(ref.index) + " not in the level-" + std::to_string(ref.level) +
                         " palette");
}

std::uint8_t PaletteEngine::base_colour(long long j) {
    switch (j) {
        case 1: return 1;
        case 2: return 2;
        case 3: return 1;
        default: throw RangeError("base palette has colours 1..3");
    }
}

std::vector<long long> PaletteEngine::a_tuple(int n, Int i) const {
    const int D = sched_.D();
    std::vector<long long> out(static_cast<size_t>(D));
    for (int k = 1; k <= D; ++k) out[static_cast<size_t>(k - 1)] = a_component(n, i, k);
    return out;
}

long long PaletteEngine::a_component(int n, Int i, int k) const {
    const long long c = sched_.c(n);
    const int D = sched_.D();
    Int count = checked_pow(c, D);
    if (i < 1 || i > count) throw RangeError("tuple index out of range");
    if (k < 1 || k > D) throw RangeError("tuple component out of range");
    Int rest = i - 1;
    for (int e = D - k; e > 0; --e) rest /= c;
    return static_cast<long long>(rest % c) + 1;
}

TileAddress PaletteEngine::tile_at(int n, const LatticePoint& m) const {
    if (n < 2) throw UsageError("tiles exist from level 2 on");
    const LevelInfo& li = info(n);
    const int d = sched_.d();
    TileAddress t;
    t.level = n;
    t.tile = m;
    for (int i = 0; i < d; ++i)
        if (m[i] < 0 || m[i] >= li.tiles_per_axis) throw RangeError("tile index out of range");
    t.strip = m[0] < li.strip_extent;
    for (int i = 1; i < d && t.strip; ++i) t.strip = m[i] < 2;
    if (t.strip) return t;

    // Ordinal = linear index minus the strip tiles that precede it.
    Int linear = 0;
    for (int i = 0; i < d; ++i) linear = checked_add(checked_mul(linear, li.tiles_per_axis), m[i]);
    Int before = std::min(m[0], li.strip_extent) * (Int{1} << (d - 1));
    if (m[0] < li.strip_extent) {
        for (int i = 1; i < d; ++i) {
            before += std::min(m[i], Int{2}) * (Int{1} << (d - 1 - i));
            if (m[i] >= 2) break;
        }
    }
    t.ordinal = linear - before + 1;
    return t;
}

TileAddress PaletteEngine::tile_of(int n, const LatticePoint& x) const {
    const LevelInfo& li = info(n);
    LatticePoint m(sched_.d());
    for (int i = 0; i < sched_.d(); ++i) {
        if (x[i] < 0 || x[i] >= li.domain_side) throw RangeError("point outside Q_" + std::to_string(n));
        m[i] = x[i] >> li.tile_shift;
    }
    return tile_at(n, m);
}

Int PaletteEngine::kept_t(const LevelInfo& li) const {
    if (!li.t) throw CapacityError("tile count at level " + std::to_string(li.n) + " exceeds 128 bits");
    return *li.t;
}

Int PaletteEngine::kept_tiles(int n) const { return kept_t(info(n)); }

Box PaletteEngine::tile_box(const TileAddress& tile) const {
    const LevelInfo& li = info(tile.level);
    Box b;
    for (int i = 0; i < sched_.d(); ++i) {
        b.lo.emplace_back(tile.tile[i], li.g);
        b.hi.emplace_back(tile.tile[i] + 1, li.g);
    }
    return b;
}

CubicSet PaletteEngine::tile_cube(const TileAddress& tile) const {
    const LevelInfo& li = info(tile.level);
    CubicSet c{LatticePoint(sched_.d()), li.tile_side};
    for (int i = 0; i < sched_.d(); ++i) c.base[i] = tile.tile[i] * li.tile_side;
    return c;
}

Int PaletteEngine::m_target_sum(int n, long long i) const {
    const LevelInfo& li = info(n);
    if (n < 2) throw UsageError("M-vectors exist from level 2 on");
    long long max_i = li.c_cur > 0 ? std::max(li.c_cur - 1, 1LL) : 1;
    if (i < 1 || i > max_i) throw RangeError("M-vector colour index out of range");
    Int t = kept_t(li);
    if (!li.stepped) return t;
    Int below = std::min<Int>(i - 1, li.alpha_n);
    Int above = std::max<Int>(i - 1 - li.alpha_n, 0);
    return checked_add(t, checked_add(checked_mul(below, li.h - 1), checked_mul(above, li.h)));
}

long long PaletteEngine::m_entry(int n, long long i, Int k) const {
    const LevelInfo& li = info(n);
    Int t = kept_t(li);
    if (k < 1 || k > t) throw RangeError("M-vector position out of range");
    Int sum = m_target_sum(n, i);
    if (!li.stepped) return 1;
    Int excess = sum - t;
    Int q = excess / (li.c_prev - 2);
    Int rem = excess % (li.c_prev - 2);
    if (k <= q) return li.c_prev - 1;
    if (k == q + 1) return 1 + static_cast<long long>(rem);
    return 1;
}

std::uint64_t PaletteEngine::memo_key(Int ordinal) const {
    if (ordinal < 0 || ordinal > static_cast<Int>(UINT64_MAX)) throw CapacityError("tile ordinal exceeds 64 bits");
    return static_cast<std::uint64_t>(ordinal);
}

long double PaletteEngine::shade_value(int n, long long j) {
    return std::ldexp(to_ld(shade_sum({n, j})), -static_cast<int>(sched_.d() * sched_.p(n - 1)));
}

long long PaletteEngine::alpha_for_tile(const TileAddress& tile) {
    const LevelInfo& li = info(tile.level);
    if (tile.strip || tile.ordinal < 1) throw UsageError("alpha is only defined on kept tiles");
    if (li.c_prev - 1 == 1) return 1;
    const std::uint64_t key = memo_key(tile.ordinal);
    {
        std::lock_guard lock(mu_);
        auto& memo = alpha_memo_[static_cast<size_t>(tile.level)];
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const double integral = density_.integrate_box(tile_box(tile));
    const long double target = std::ldexp(static_cast<long double>(integral), sched_.d() * li.g);
    long long best = 1;
    long double best_gap = 0;
    for (long long a = 1; a <= li.c_prev - 1; ++a) {
        long double gap = std::fabs(shade_value(tile.level - 1, a) - target);
        if (a == 1 || gap < best_gap) {
            best = a;
            best_gap = gap;
        }
    }
    if (li.gap_bound >= 0 && best_gap > li.gap_bound * (1 + 1e-12L) + 1e-12L) {
        std::ostringstream os;
        os << "alpha gap " << static_cast<double>(best_gap) << " exceeds shade-step bound "
           << static_cast<double>(li.gap_bound) << " at level " << tile.level << " tile " << describe(tile.tile);
        throw InvariantError(os.str());
    }
    std::lock_guard lock(mu_);
    alpha_memo_[static_cast<size_t>(tile.level)].emplace(key, best);
    return best;
}

void PaletteEngine::precompute_alphas(int n) {
    const LevelInfo& li = info(n);
    if (n < 2 || li.c_prev - 1 == 1) return;
    {
        std::lock_guard lock(mu_);
        if (alpha_complete_[static_cast<size_t>(n)]) return;
    }
    Int t = kept_t(li);
    if (t > opts_.alpha_budget)
        throw CapacityError("alpha sweep at level " + std::to_string(n) + " needs " + to_string(t) +
                            " tiles, budget is " + to_string(opts_.alpha_budget));
    // Shades of the level below first, so the workers only read caches.
    for (long long a = 1; a <= li.c_prev - 1; ++a) shade_sum({n - 1, a});

    const int d = sched_.d();
    const Int total = checked_pow(li.tiles_per_axis, d);
    const int workers = std::max(1, opts_.threads);
    auto work = [&](Int from, Int to) {
        LatticePoint m(d);
        for (Int lin = from; lin < to; ++lin) {
            Int rest = lin;
            for (int i = d - 1; i >= 0; --i) {
                m[i] = rest % li.tiles_per_axis;
                rest /= li.tiles_per_axis;
            }
            TileAddress tile = tile_at(n, m);
            if (!tile.strip) alpha_for_tile(tile);
        }
    };
    if (workers == 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        Int chunk = total / workers + 1;
        for (int w = 0; w < workers; ++w) {
            Int from = chunk * w;
            Int to = std::min(total, from + chunk);
            if (from < to) pool.emplace_back(work, from, to);
        }
        for (auto& th : pool) th.join();
    }
    std::lock_guard lock(mu_);
    alpha_complete_[static_cast<size_t>(n)] = true;
}

long long PaletteEngine::child_colour(long long j, const TileAddress& tile) {
    const int n = tile.level;
    const LevelInfo& li = info(n);
    const int d = sched_.d();
    if (tile.strip) {
        const LatticePoint& m = tile.tile;
        int k = 1 + (static_cast<int>(m[0] & 1) << (d - 1));
        for (int i = 1; i < d; ++i) k += static_cast<int>(m[i]) << (d - 1 - i);
        return a_component(n - 1, m[0] / 2 + 1, k);
    }
    if (j == li.c_cur) return alpha_for_tile(tile);
    return m_entry(n, j, tile.ordinal);
}

bool PaletteEngine::materializable(int n) const {
    if (n < 1 || n > top_level()) return false;
    try {
        return checked_pow(info(n).domain_side, sched_.d()) <= opts_.materialize_cap;
    } catch (const CapacityError&) {
        return false;
    }
}

std::uint8_t PaletteEngine::eval_colour(ColourRef ref, const LatticePoint& x) {
    check_colour(ref);
    const int d = sched_.d();
    int n = ref.level;
    long long j = ref.index;
    const LevelInfo& top = info(n);
    for (int i = 0; i < d; ++i)
        if (x[i] < 0 || x[i] >= top.domain_side) throw RangeError("point outside Q_" + std::to_string(n));
    LatticePoint local = x;
    LatticePoint m(d);
    while (n > 1) {
        const LevelInfo& li = levels_[static_cast<size_t>(n)];
        for (int i = 0; i < d; ++i) {
            m[i] = local[i] >> li.tile_shift;
            local[i] &= li.tile_side - 1;
        }
        j = child_colour(j, tile_at(n, m));
        --n;
    }
    return base_colour(j);
}

BigInt PaletteEngine::strip_sum(int n) {
    const LevelInfo& li = info(n);
    if (n < 2) return 0;
    BigInt total = 0;
    for (long long j = 1; j <= li.c_prev; ++j) total += shade_sum({n - 1, j});
    // Every colour appears D * c^{D-1} times across the lexicographic tuples.
    return total * sched_.D() * pow(BigInt(li.c_prev), static_cast<unsigned>(sched_.D() - 1));
}

BigInt PaletteEngine::shade_sum(ColourRef ref) {
    check_colour(ref);
    const auto key = std::make_pair(ref.level, ref.index);
    {
        std::lock_guard lock(mu_);
        if (auto it = shade_memo_.find(key); it != shade_memo_.end()) return it->second;
    }
    BigInt result;
    if (ref.level == 1) {
        result = base_colour(ref.index);
    } else {
        const LevelInfo& li = info(ref.level);
        const int n = ref.level;
        BigInt t = to_big(kept_t(li));
        BigInt kept = 0;
        if (li.c_prev - 1 == 1 || (ref.index != li.c_cur && !li.stepped)) {
            kept = t * shade_sum({n - 1, 1});
        } else if (ref.index == li.c_cur) {
            precompute_alphas(n);
            std::map<long long, long long> counts;
            {
                std::lock_guard lock(mu_);
                for (const auto& [k, a] : alpha_memo_[static_cast<size_t>(n)]) ++counts[a];
            }
            for (const auto& [a, cnt] : counts) kept += shade_sum({n - 1, a}) * cnt;
        } else {
            BigInt excess = to_big(m_target_sum(n, ref.index)) - t;
            BigInt q = excess / (li.c_prev - 2);
            BigInt rem = excess % (li.c_prev - 2);
            kept = q * shade_sum({n - 1, li.c_prev - 1});
            if (q < t) {
                kept += shade_sum({n - 1, 1 + static_cast<long long>(rem)});
                kept += (t - q - 1) * shade_sum({n - 1, 1});
            }
        }
        result = strip_sum(n) + kept;
    }
    std::lock_guard lock(mu_);
    shade_memo_.emplace(key, result);
    return result;
}

Rational PaletteEngine::shade(ColourRef ref) {
    const int n = ref.level;
    BigInt sum = shade_sum(ref);
    return Rational(sum, big_pow2(static_cast<long long>(sched_.d()) * sched_.p(n - 1)));
}

const std::vector<Grid>& PaletteEngine::materialize_level(int n) {
    const LevelInfo& li = info(n);
    {
        std::lock_guard lock(mu_);
        if (auto it = grid_memo_.find(n); it != grid_memo_.end()) return it->second;
    }
    const int d = sched_.d();
    Int cells = checked_pow(li.domain_side, d);
    if (cells > opts_.materialize_cap)
        throw CapacityError("level " + std::to_string(n) + " has " + to_string(cells) + " cells, cap is " +
                            to_string(opts_.materialize_cap));
    const long long count = colours(n);
    std::vector<Grid> grids;
    if (n == 1) {
        for (long long j = 1; j <= count; ++j) {
            Grid g(d, 1);
            g.values[0] = base_colour(j);
            grids.push_back(std::move(g));
        }
    } else {
        const std::vector<Grid>& prev = materialize_level(n - 1);
        const long long T = static_cast<long long>(li.tile_side);
        const long long side = static_cast<long long>(li.domain_side);
        const CubicSet whole{LatticePoint(d), side};
        const auto tiles = natural_partition(whole, T);
        // Strip box [0, 2T c^D) x [0, 2T)^{d-1}; everything else is kept.
        LatticePoint strip_hi = LatticePoint::filled(d, 2 * T);
        strip_hi[0] = 2 * T * li.strip_blocks;

        for (long long j = 1; j <= count; ++j) {
            Grid g(d, side);
            std::vector<long long> tuple(static_cast<size_t>(sched_.D()), 1);
            Int i = 1;
            do {
                CubicSet block{LatticePoint(d), 2 * T};
                block.base[0] = 2 * T * (i - 1);
                const auto parts = natural_partition(block, T);
                for (size_t k = 0; k < parts.size(); ++k) copy_into(g, parts[k].base, prev[static_cast<size_t>(tuple[k] - 1)]);
                ++i;
            } while (next_tuple(tuple, li.c_prev));

            Int ordinal = 0;
            for (const auto& tile : tiles) {
                bool in_strip = true;
                for (int a = 0; a < d; ++a) in_strip = in_strip && tile.base[a] < strip_hi[a];
                if (in_strip) continue;
                ++ordinal;
                long long child;
                if (j == li.c_cur) {
                    LatticePoint m(d);
                    for (int a = 0; a < d; ++a) m[a] = tile.base[a] / T;
                    child = alpha_for_tile(tile_at(n, m));
                } else {
                    child = m_entry(n, j, ordinal);
                }
                copy_into(g, tile.base, prev[static_cast<size_t>(child - 1)]);
            }
            grids.push_back(std::move(g));
        }
    }
    std::lock_guard lock(mu_);
    return grid_memo_.emplace(n, std::move(grids)).first->second;
}

Grid PaletteEngine::materialize(ColourRef ref) {
    check_colour(ref);
    return materialize_level(ref.level)[static_cast<size_t>(ref.index - 1)];
}

GoodnessReport PaletteEngine::check_goodness_grids(const LevelSchedule& sched, int n, const std::vector<Grid>& level,
                                                   const std::vector<Grid>& previous) {
    GoodnessReport rep;
    rep.level = n;
    rep.mode = "direct";
    if (n < 2) return rep;
    const int d = sched.d();
    const long long T = static_cast<long long>(pow2(sched.p(n - 2)));
    const long long side = static_cast<long long>(pow2(sched.p(n - 1)));
    const long long c_prev = static_cast<long long>(previous.size());
    constexpr size_t kMaxListed = 20;
    auto fail = [&](std::string msg) {
        if (rep.failures.size() < kMaxListed) rep.failures.push_back(std::move(msg));
    };

    const auto tiles = natural_partition(CubicSet{LatticePoint(d), side}, T);
    for (const auto& tile : tiles) {
        ++rep.tiles_checked;
        for (size_t j = 0; j < level.size(); ++j) {
            bool found = false;
            for (const auto& cand : previous) {
                if (block_equals(level[j], tile.base, cand)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                rep.condition_a = false;
                fail("condition (A): colour " + std::to_string(j + 1) + " on tile " + describe(tile.base) +
                     " is no level-" + std::to_string(n - 1) + " colour");
            }
        }
    }

    std::vector<long long> tuple(static_cast<size_t>(1) << d, 1);
    long long i = 1;
    do {
        CubicSet block{LatticePoint(d), 2 * T};
        block.base[0] = 2 * T * (i - 1);
        const auto parts = natural_partition(block, T);
        for (size_t k = 0; k < parts.size(); ++k) {
            for (size_t j = 0; j < level.size(); ++j) {
                if (!block_equals(level[j], parts[k].base, previous[static_cast<size_t>(tuple[k] - 1)])) {
                    rep.condition_b = false;
                    fail("condition (B): colour " + std::to_string(j + 1) + " block " + std::to_string(i) +
                         " sub-cube " + std::to_string(k + 1) + " should be colour " + std::to_string(tuple[k]));
                }
            }
        }
        ++i;
    } while (next_tuple(tuple, c_prev));
    for (const auto& g : level) rep.points_checked += static_cast<long long>(g.cells());
    return rep;
}

GoodnessReport PaletteEngine::check_goodness(int n) {
    if (n < 2) {
        GoodnessReport rep;
        rep.level = n;
        rep.mode = "direct";
        return rep;
    }
    return check_goodness_grids(sched_, n, materialize_level(n), materialize_level(n - 1));
}

GoodnessReport PaletteEngine::check_goodness_sampled(int n, long long samples, std::uint64_t seed) {
    GoodnessReport rep;
    rep.level = n;
    rep.mode = "descent";
    if (n < 2) return rep;
    const LevelInfo& li = info(n);
    const std::vector<Grid>& prev = materialize_level(n - 1);
    const int d = sched_.d();
    const long long count = colours(n);
    constexpr int kPerTile = 16;
    std::mt19937_64 rng(seed);
    auto draw = [&](Int bound) { return static_cast<Int>(rng() % static_cast<std::uint64_t>(bound)); };

    const long long tiles = (samples + kPerTile - 1) / kPerTile;
    for (long long s = 0; s < tiles; ++s) {
        LatticePoint m(d);
        if (s % 2 == 0) {
            m[0] = draw(li.strip_extent);
            for (int i = 1; i < d; ++i) m[i] = draw(2);
        } else {
            for (int i = 0; i < d; ++i) m[i] = draw(li.tiles_per_axis);
        }
        TileAddress tile = tile_at(n, m);
        CubicSet cube = tile_cube(tile);
        std::vector<LatticePoint> offsets;
        for (int p = 0; p < kPerTile; ++p) {
            LatticePoint off(d);
            for (int i = 0; i < d; ++i) off[i] = draw(li.tile_side);
            offsets.push_back(off);
        }
        long long expected_strip = 0;
        if (tile.strip) {
            int k = 1 + (static_cast<int>(m[0] & 1) << (d - 1));
            for (int i = 1; i < d; ++i) k += static_cast<int>(m[i]) << (d - 1 - i);
            expected_strip = a_component(n - 1, m[0] / 2 + 1, k);
        }
        for (long long j = 1; j <= count; ++j) {
            std::vector<bool> candidate(prev.size(), true);
            for (const auto& off : offsets) {
                std::uint8_t v = eval_colour({n, j}, cube.base + off);
                for (size_t q = 0; q < prev.size(); ++q)
                    if (candidate[q] && prev[q].at(off) != v) candidate[q] = false;
            }
            bool any = std::find(candidate.begin(), candidate.end(), true) != candidate.end();
            if (!any) {
                rep.condition_a = false;
                if (rep.failures.size() < 20)
                    rep.failures.push_back("condition (A): colour " + std::to_string(j) + " on tile " +
                                           describe(cube.base) + " matches no level-" + std::to_string(n - 1) + " colour");
            }
            if (tile.strip && !candidate[static_cast<size_t>(expected_strip - 1)]) {
                rep.condition_b = false;
                if (rep.failures.size() < 20)
                    rep.failures.push_back("condition (B): colour " + std::to_string(j) + " strip tile " +
                                           describe(cube.base) + " should be colour " + std::to_string(expected_strip));
            }
        }
        ++rep.tiles_checked;
        rep.points_checked += kPerTile;
    }
    return rep;
}

}  // namespace delone
