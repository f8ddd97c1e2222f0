#include "delone/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

namespace delone {

namespace {

int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

Rational rat(Int v) { return Rational(to_big(v)); }
Rational rat(const Dyadic& v) { return Rational(to_big(v.numerator()), big_pow2(v.exponent())); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string str(const LatticePoint& p) {
    std::string s = "(";
    for (int i = 0; i < p.dim(); ++i) s += (i ? "," : "") + to_string(p[i]);
    return s + ")";
}

std::string str(const RealPoint& p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + p[i].to_decimal();
    return s + ")";
}

Int draw(std::mt19937_64& rng, Int bound) {
    return static_cast<Int>(rng() % static_cast<std::uint64_t>(bound));
}

Rational norm_sq(const LatticePoint& a, const LatticePoint& b) {
    Int s = 0;
    for (int i = 0; i < a.dim(); ++i) s = checked_add(s, checked_mul(a[i] - b[i], a[i] - b[i]));
    return rat(s);
}

Rational norm_sq(const RealPoint& a, const RealPoint& b) {
    Dyadic s;
    for (size_t i = 0; i < a.size(); ++i) {
        Dyadic t = a[i] - b[i];
        s = s + t * t;
    }
    return rat(s);
}

// Cells at Chebyshev distance exactly k from c.
template <class F>
void shell(const LatticePoint& c, Int k, F&& f) {
    const int d = c.dim();
    if (k == 0) {
        f(c);
        return;
    }
    LatticePoint lo(d), hi(d), x(d);
    for (int i = 0; i < d; ++i) {
        for (Int side : {-k, k}) {
            for (int j = 0; j < d; ++j) {
                if (j < i) {
                    lo[j] = c[j] - k + 1;
                    hi[j] = c[j] + k - 1;
                } else if (j == i) {
                    lo[j] = hi[j] = c[j] + side;
                } else {
                    lo[j] = c[j] - k;
                    hi[j] = c[j] + k;
                }
            }
            bool empty = false;
            for (int j = 0; j < d; ++j) empty = empty || lo[j] > hi[j];
            if (empty) continue;
            x = lo;
            while (true) {
                f(x);
                int j = d - 1;
                for (; j >= 0; --j) {
                    if (++x[j] <= hi[j]) break;
                    x[j] = lo[j];
                }
                if (j < 0) break;
            }
        }
    }
}

struct Hit {
    bool found = false;
    LatticePoint w;
    long double dist = 0;
    long long scanned = 0;
};

// Nearest matching cell to a target near `start`. `offset` bounds the distance
// from start to the target; `reach` bounds the admissible distance.
template <class Match, class Dist, class Within>
Hit ring_search(const PsiRaster& ras, const LatticePoint& start, long double offset, long double reach, Match&& match,
                Dist&& dist, Within&& within) {
    const int d = start.dim();
    Int max_k = 0;
    for (int i = 0; i < d; ++i) {
        max_k = std::max(max_k, start[i] - ras.box.base[i]);
        max_k = std::max(max_k, ras.box.base[i] + ras.box.side - 1 - start[i]);
    }
    max_k = std::min<Int>(max_k, static_cast<Int>(std::ceil(reach + offset)) + 1);
    Hit hit;
    for (Int k = 0; k <= max_k; ++k) {
        shell(start, k, [&](const LatticePoint& c) {
            if (!ras.covers(c)) return;
            ++hit.scanned;
            if (!match(c)) return;
            long double dd = dist(c);
            if (hit.found && (dd > hit.dist || (dd == hit.dist && !(c < hit.w)))) return;
            if (!within(c)) return;
            hit.found = true;
            hit.w = c;
            hit.dist = dd;
        });
        if (hit.found && static_cast<long double>(k + 1) - offset > hit.dist) break;
    }
    return hit;
}

// Fast matcher of a Psi patch against raster positions.
struct PatchMatcher {
    const PsiRaster* ras;
    std::vector<long long> deltas;
    std::vector<std::uint8_t> values;
    Int extent = 0;

    PatchMatcher(const PsiRaster& r, const Patch& p) : ras(&r), values(p.values) {
        const int d = r.box.dim();
        for (const auto& o : p.offsets) {
            long long delta = 0;
            for (int i = 0; i < d; ++i) {
                delta = delta * static_cast<long long>(r.box.side) + static_cast<long long>(o[i]);
                extent = std::max(extent, o[i] < 0 ? -o[i] : o[i]);
            }
            deltas.push_back(delta);
        }
    }

    bool operator()(const LatticePoint& w) const {
        const int d = w.dim();
        for (int i = 0; i < d; ++i)
            if (w[i] - extent < ras->box.base[i] || w[i] + extent >= ras->box.base[i] + ras->box.side) return false;
        const long long base = static_cast<long long>(ras->grid.index(w - ras->box.base));
        const auto& g = ras->grid.values;
        for (size_t k = 0; k < deltas.size(); ++k)
            if (g[static_cast<size_t>(base + deltas[k])] != values[k]) return false;
        return true;
    }
};

Int ceil_of(const Surd& s, int d) { return static_cast<Int>(std::ceil(s.value(d))); }

// X inside the open ball B(center, r), translated by -center, sorted.
std::vector<RealPoint> x_ball(const PsiRaster& ras, const MarkerSets& markers, const RealPoint& center,
                              const Rational& r) {
    const int d = ras.box.dim();
    const Int e = static_cast<Int>(std::ceil(r.convert_to<double>())) + 1;
    LatticePoint lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        Int c = center[static_cast<size_t>(i)].floor();
        lo[i] = c - e;
        hi[i] = c + e;
    }
    const Rational r2 = r * r;
    std::vector<RealPoint> out;
    LatticePoint z = lo;
    while (true) {
        for (const auto& t : markers.of(ras.at(z))) {
            RealPoint p(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i)
                p[static_cast<size_t>(i)] = Dyadic(z[i]) + t[static_cast<size_t>(i)] - center[static_cast<size_t>(i)];
            if (norm_sq(p, RealPoint(static_cast<size_t>(d))) < r2) out.push_back(std::move(p));
        }
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++z[i] <= hi[i]) break;
            z[i] = lo[i];
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class F>
void run_parallel(int count, int threads, F&& f) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) f(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

double Surd::value(int d) const {
    return a.convert_to<double>() + b.convert_to<double>() * std::sqrt(static_cast<double>(d));
}

int sign(const Surd& s, int d) {
    int sa = sgn(s.a), sb = sgn(s.b);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    int sd = sgn(s.a * s.a - s.b * s.b * d);
    return sa > 0 ? sd : -sd;
}

namespace {
int sqrt_cmp(const Rational& q, const Surd& s, int d) {
    int ss = sign(s, d);
    if (ss < 0) return 1;
    if (ss == 0) return q > 0 ? 1 : 0;
    return sign(Surd{q - s.a * s.a - s.b * s.b * d, -2 * s.a * s.b}, d);
}
}  // namespace

bool sqrt_le(const Rational& q, const Surd& s, int d) { return sqrt_cmp(q, s, d) <= 0; }
bool sqrt_lt(const Rational& q, const Surd& s, int d) { return sqrt_cmp(q, s, d) < 0; }

std::vector<LatticePoint> lattice_ball(int d, const Surd& r) {
    const double v = r.value(d);
    if (v <= 0) return {};
    const Int e = static_cast<Int>(std::ceil(v));
    std::vector<LatticePoint> out;
    LatticePoint z = LatticePoint::filled(d, -e);
    while (true) {
        Int q = 0;
        for (int i = 0; i < d; ++i) q += z[i] * z[i];
        double root = std::sqrt(static_cast<double>(q));
        bool in;
        if (root < v - 1e-7 * (1 + v))
            in = true;
        else if (root > v + 1e-7 * (1 + v))
            in = false;
        else
            in = sqrt_lt(rat(q), r, d);
        if (in) out.push_back(z);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++z[i] <= e) break;
            z[i] = -e;
        }
        if (i < 0) break;
    }
    return out;
}

std::uint8_t PsiRaster::at(const LatticePoint& x) const {
    if (!covers(x)) throw CoverageError("point " + str(x) + " outside the Psi raster");
    return grid.at(x - box.base);
}

PsiRaster coverage_raster(const PsiField& field, int block) {
    if (block > field.max_psi_level())
        throw CoverageError("block " + std::to_string(block) + " needs palette level " + std::to_string(block + 1) +
                            ", built through " + std::to_string(field.engine().top_level()));
    PsiRaster r;
    r.box = field.cover_block(block);
    r.grid = field.psi_window(r.box);
    return r;
}

Patch extract_patch(const PsiField& field, const LatticePoint& center, const Surd& r) {
    Patch p;
    p.center = center;
    p.radius = r;
    p.offsets = lattice_ball(center.dim(), r);
    for (const auto& o : p.offsets) p.values.push_back(field.psi(center + o));
    return p;
}

Patch extract_patch(const PsiRaster& raster, const LatticePoint& center, const Surd& r) {
    Patch p;
    p.center = center;
    p.radius = r;
    p.offsets = lattice_ball(center.dim(), r);
    for (const auto& o : p.offsets) p.values.push_back(raster.at(center + o));
    return p;
}

PointPatch extract_patch(const PointWindow& pw, const RealPoint& center, const Rational& r) {
    const int d = pw.window.dim();
    for (int i = 0; i < d; ++i) {
        Rational c = rat(center[static_cast<size_t>(i)]);
        if (c - r < rat(pw.window.lo[static_cast<size_t>(i)]) || c + r > rat(pw.window.hi[static_cast<size_t>(i)]))
            throw CoverageError("ball around " + str(center) + " leaves the point window");
    }
    PointPatch out;
    out.center = center;
    out.radius = r;
    const Rational r2 = r * r;
    for (const auto& p : pw.points) {
        if (norm_sq(p, center) < r2) {
            RealPoint q(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) q[static_cast<size_t>(i)] = p[static_cast<size_t>(i)] - center[static_cast<size_t>(i)];
            out.points.push_back(std::move(q));
        }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

std::optional<LatticePoint> find_patch_translate(const PsiRaster& raster, const Patch& patch, const LatticePoint& y,
                                                 const Surd& R) {
    const int d = y.dim();
    const Surd reach{R.a - patch.radius.a, R.b - patch.radius.b};
    if (sign(reach, d) < 0) return std::nullopt;
    const double rv = reach.value(d);
    const Int e = static_cast<Int>(std::floor(rv)) + 1;
    PatchMatcher match(raster, patch);
    LatticePoint lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = std::max(y[i] - e, raster.box.base[i] + match.extent);
        hi[i] = std::min(y[i] + e, raster.box.base[i] + raster.box.side - 1 - match.extent);
        if (lo[i] > hi[i]) return std::nullopt;
    }
    LatticePoint w = lo;
    while (true) {
        Int q = 0;
        for (int i = 0; i < d; ++i) q += (w[i] - y[i]) * (w[i] - y[i]);
        if (static_cast<double>(q) <= rv * rv + 1e-6 * (1 + rv * rv) && match(w) && sqrt_le(rat(q), reach, d)) return w;
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++w[i] <= hi[i]) break;
            w[i] = lo[i];
        }
        if (i < 0) return std::nullopt;
    }
}

std::optional<LatticePoint> find_patch_translate(const PsiField& field, const Patch& patch, const LatticePoint& y,
                                                 const Surd& R) {
    constexpr Int kRasterCap = Int{1} << 24;
    const int d = y.dim();
    const Int e = ceil_of(R, d) + 1;
    CubicSet need{y - LatticePoint::filled(d, e), 2 * e + 1};
    int chosen = 0;
    for (int n = 1; n <= field.max_psi_level(); ++n) {
        CubicSet b = field.cover_block(n);
        if (checked_pow(b.side, d) > kRasterCap) break;
        chosen = n;
        if (b.contains(need)) break;
    }
    if (chosen == 0 || !field.cover_block(chosen).contains(y))
        throw CoverageError("search centre " + str(y) + " outside the readable blocks");
    return find_patch_translate(coverage_raster(field, chosen), patch, y, R);
}

void Report::slack(double s) {
    if (!has_slack || s < worst_slack) worst_slack = s;
    has_slack = true;
}

void Report::fail(const std::string& what) {
    pass = false;
    if (failures.size() < 50) failures.push_back(what);
}

nlohmann::json Report::trailer() const {
    nlohmann::json j = {{"check", check}, {"pass", pass}, {"seeds", seeds}, {"failures", failures}, {"data", data}};
    j["worst_slack"] = has_slack ? nlohmann::json(worst_slack) : nlohmann::json(nullptr);
    return j;
}

std::string Report::text() const {
    std::string out = "[" + check + "]\n";
    for (const auto& l : lines) out += "  " + l + "\n";
    for (const auto& f : failures) out += "  FAIL: " + f + "\n";
    out += "  result: " + std::string(pass ? "PASS" : "FAIL");
    if (has_slack) out += ", worst slack " + fmt(worst_slack);
    out += "\n#json " + trailer().dump() + "\n";
    return out;
}

int matching_level(const LevelSchedule& s, const Surd& r) {
    const int d = s.d();
    const Surd two_r{2 * r.a, 2 * r.b};
    for (int n = 2; n <= s.n_max(); ++n) {
        Rational lo = rat(pow2(s.p(n - 2)));
        Rational hi = rat(pow2(s.p(n - 1)));
        bool above = sign(Surd{two_r.a - lo, two_r.b}, d) > 0;
        bool below = sign(Surd{two_r.a - hi, two_r.b}, d) <= 0;
        if (above && below) return n;
    }
    return 0;
}

Report verify_mapping_repetitivity(const PsiField& field, int n, const Rational& r, const SampleSpec& spec) {
    Report rep;
    rep.check = "repetitivity";
    rep.seeds.push_back(spec.seed);
    const auto& s = field.schedule();
    const int d = s.d();
    const Surd rs{r, 0};
    if (n < 2 || matching_level(s, rs) != n)
        throw UsageError("radius " + to_string(r) + " does not satisfy 2^{p_{n-2}} < 2r <= 2^{p_{n-1}} for n=" +
                         std::to_string(n));
    const PsiRaster ras = coverage_raster(field, n + 1);
    const Surd R{0, rat(pow2(s.p(n)))};
    const Surd reach{-r, R.b};
    const double Rv = R.value(d);
    const double rv = r.convert_to<double>();
    const auto offsets = lattice_ball(d, rs);
    Int e = 0;
    for (const auto& o : offsets)
        for (int i = 0; i < d; ++i) e = std::max(e, o[i] < 0 ? -o[i] : o[i]);

    std::mt19937_64 rng(spec.seed);
    std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
    for (int k = 0; k < spec.pairs; ++k) {
        LatticePoint x(d), y(d);
        for (int i = 0; i < d; ++i) {
            x[i] = ras.box.base[i] + e + draw(rng, ras.box.side - 2 * e);
            y[i] = ras.box.base[i] + draw(rng, ras.box.side);
        }
        if (k == 0) {
            // Opposite corners of the coverage.
            for (int i = 0; i < d; ++i) {
                x[i] = ras.box.base[i] + e;
                y[i] = ras.box.base[i] + ras.box.side - 1;
            }
        }
        pairs.emplace_back(x, y);
    }

    std::vector<Hit> hits(pairs.size());
    run_parallel(static_cast<int>(pairs.size()), spec.threads, [&](int k) {
        const auto& [x, y] = pairs[static_cast<size_t>(k)];
        Patch p = extract_patch(ras, x, rs);
        PatchMatcher match(ras, p);
        hits[static_cast<size_t>(k)] = ring_search(
            ras, y, 0.0L, static_cast<long double>(Rv - rv), match,
            [&](const LatticePoint& w) { return std::sqrt(static_cast<long double>(norm_sq(w, y).convert_to<double>())); },
            [&](const LatticePoint& w) { return sqrt_le(norm_sq(w, y), reach, d); });
    });

    double worst_min_R = 0;
    long long ok = 0;
    for (size_t k = 0; k < pairs.size(); ++k) {
        const auto& [x, y] = pairs[k];
        const Hit& h = hits[k];
        if (h.found) {
            ++ok;
            double minR = static_cast<double>(h.dist) + rv;
            worst_min_R = std::max(worst_min_R, minR);
            rep.slack(Rv - minR);
            rep.lines.push_back("pair " + std::to_string(k + 1) + ": x=" + str(x) + " y=" + str(y) + " w=" + str(h.w) +
                                " |w-y|+r=" + fmt(minR));
        } else {
            rep.fail("pair " + std::to_string(k + 1) + ": x=" + str(x) + " y=" + str(y) + " no translate within R");
        }
    }
    // The lexicographic search must agree with the nearest-witness search.
    for (size_t k = 0; k < std::min<size_t>(2, pairs.size()); ++k) {
        const auto& [x, y] = pairs[k];
        auto w = find_patch_translate(ras, extract_patch(ras, x, rs), y, R);
        if (w.has_value() != hits[k].found)
            rep.fail("pair " + std::to_string(k + 1) + ": lexicographic and nearest searches disagree");
        else if (w)
            rep.lines.push_back("pair " + std::to_string(k + 1) + ": first lexicographic witness " + str(*w));
    }
    rep.lines.insert(rep.lines.begin(), "level " + std::to_string(n) + ", r=" + to_string(r) + ", R=sqrt(" +
                                            std::to_string(d) + ")*2^" + std::to_string(s.p(n)) + "=" + fmt(Rv) +
                                            ", coverage " + str(ras.box.base) + "+[0," + to_string(ras.box.side) +
                                            ")^d, " + std::to_string(ok) + "/" + std::to_string(pairs.size()) +
                                            " pairs ok, worst minimal R " + fmt(worst_min_R));
    rep.data = {{"level", n},           {"r", to_string(r)},       {"R", Rv},
                {"pairs", pairs.size()}, {"ok", ok},                {"worst_minimal_R", worst_min_R},
                {"seed", spec.seed}};
    return rep;
}

Report verify_net_repetitivity(const PsiField& field, const std::optional<CubicSet>& window, const Rational& r,
                               const SampleSpec& spec) {
    Report rep;
    rep.check = "net-repetitivity";
    rep.seeds.push_back(spec.seed);
    const auto& s = field.schedule();
    const int d = s.d();
    const Surd big_r{r, 3};  // r + 3 sqrt(d)
    const int n = matching_level(s, big_r);
    if (n == 0) throw UsageError("no level matches r + 3 sqrt(d) for r=" + to_string(r));
    const PsiRaster ras = coverage_raster(field, n + 1);
    const CubicSet dom = window.value_or(ras.box);
    if (!ras.box.contains(dom)) throw CoverageError("sampling window leaves the covered block");
    const MarkerSets markers = MarkerSets::standard(d);

    const Rational Rn = rat(pow2(s.p(n)));
    const Surd target{0, Rn + 1};       // R(r + 3 sqrt d) + sqrt d
    const Surd reach_x{-r, Rn + 1};     // |w' - y| <= target - r
    const Surd reach_psi{-r, Rn - 3};   // R(r') - r'
    const double rv = r.convert_to<double>();
    const Int m = ceil_of(big_r, d) + 2;
    if (dom.side <= 2 * m) throw CoverageError("sampling window too small for the radius");

    struct Pair {
        LatticePoint zx;
        RealPoint x, y;
    };
    std::mt19937_64 rng(spec.seed);
    std::vector<Pair> pairs;
    for (int k = 0; k < spec.pairs; ++k) {
        Pair p;
        p.zx = LatticePoint(d);
        for (int i = 0; i < d; ++i) p.zx[i] = dom.base[i] + m + draw(rng, dom.side - 2 * m);
        const auto& ts = markers.of(ras.at(p.zx));
        const RealPoint& t = ts[static_cast<size_t>(draw(rng, static_cast<Int>(ts.size())))];
        p.x.resize(static_cast<size_t>(d));
        p.y.resize(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) {
            p.x[static_cast<size_t>(i)] = Dyadic(p.zx[i]) + t[static_cast<size_t>(i)];
            p.y[static_cast<size_t>(i)] = Dyadic(dom.base[i] + draw(rng, dom.side)) + Dyadic(draw(rng, 4), 2);
        }
        pairs.push_back(std::move(p));
    }

    struct Outcome {
        Hit hit;
        bool exact_ok = false;
        bool psi_found = false;
        bool implication_ok = false;
        std::size_t patch_points = 0;
    };
    std::vector<Outcome> out(pairs.size());
    const Int e = static_cast<Int>(std::ceil(rv)) + 1;

    run_parallel(static_cast<int>(pairs.size()), spec.threads, [&](int k) {
        const Pair& p = pairs[static_cast<size_t>(k)];
        Outcome& o = out[static_cast<size_t>(k)];
        RealPoint tx(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) tx[static_cast<size_t>(i)] = p.x[static_cast<size_t>(i)] - Dyadic(p.zx[i]);
        const auto patch = x_ball(ras, markers, p.x, r);
        o.patch_points = patch.size();

        // For an integer translate the ball meets each cell in the same place,
        // so only cells whose in-ball markers depend on the value constrain it.
        std::vector<std::pair<LatticePoint, std::uint8_t>> need;
        const Rational r2 = r * r;
        LatticePoint off = LatticePoint::filled(d, -e);
        while (true) {
            std::vector<RealPoint> in[2];
            for (int v = 1; v <= 2; ++v)
                for (const auto& t : markers.of(v)) {
                    RealPoint q(static_cast<size_t>(d));
                    for (int i = 0; i < d; ++i)
                        q[static_cast<size_t>(i)] = Dyadic(off[i]) + t[static_cast<size_t>(i)] - tx[static_cast<size_t>(i)];
                    if (norm_sq(q, RealPoint(static_cast<size_t>(d))) < r2) in[v - 1].push_back(q);
                }
            if (in[0] != in[1]) need.emplace_back(off, ras.at(p.zx + off));
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++off[i] <= e) break;
                off[i] = -e;
            }
            if (i < 0) break;
        }
        auto match = [&](const LatticePoint& c) {
            for (int i = 0; i < d; ++i)
                if (c[i] - e < ras.box.base[i] || c[i] + e >= ras.box.base[i] + ras.box.side) return false;
            for (const auto& [o2, v] : need)
                if (ras.grid.at(c + o2 - ras.box.base) != v) return false;
            return true;
        };
        auto wpoint = [&](const LatticePoint& c) {
            RealPoint w(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) w[static_cast<size_t>(i)] = Dyadic(c[i]) + tx[static_cast<size_t>(i)];
            return w;
        };
        LatticePoint yc(d);
        for (int i = 0; i < d; ++i) yc[i] = p.y[static_cast<size_t>(i)].floor();
        const long double offset = std::sqrt(static_cast<long double>(d)) + 1e-9L;
        o.hit = ring_search(
            ras, yc, offset, static_cast<long double>(reach_x.value(d)), match,
            [&](const LatticePoint& c) { return std::sqrt(static_cast<long double>(norm_sq(wpoint(c), p.y).convert_to<double>())); },
            [&](const LatticePoint& c) { return sqrt_le(norm_sq(wpoint(c), p.y), reach_x, d); });
        if (o.hit.found) o.exact_ok = x_ball(ras, markers, wpoint(o.hit.w), r) == patch;

        // Transfer: a Psi witness at radius r + 3 sqrt(d) gives an X witness.
        Patch psi_patch = extract_patch(ras, p.zx, big_r);
        PatchMatcher pm(ras, psi_patch);
        Hit ph = ring_search(
            ras, yc, 0.0L, static_cast<long double>(reach_psi.value(d)), pm,
            [&](const LatticePoint& w) { return std::sqrt(static_cast<long double>(norm_sq(w, yc).convert_to<double>())); },
            [&](const LatticePoint& w) { return sqrt_le(norm_sq(w, yc), reach_psi, d); });
        o.psi_found = ph.found;
        if (ph.found) {
            RealPoint w2 = wpoint(ph.w);
            o.implication_ok = x_ball(ras, markers, w2, r) == patch && sqrt_le(norm_sq(w2, p.y), reach_x, d);
        }
    });

    const double Tv = target.value(d);
    long long ok = 0, implications = 0;
    double worst = 0;
    for (size_t k = 0; k < pairs.size(); ++k) {
        const Pair& p = pairs[k];
        const Outcome& o = out[k];
        std::string head = "pair " + std::to_string(k + 1) + ": x=" + str(p.x) + " y=" + str(p.y);
        if (!o.hit.found) {
            rep.fail(head + " no integer translate of the X-patch within the bound");
            continue;
        }
        if (!o.exact_ok) {
            rep.fail(head + " cell filter accepted a translate whose points differ");
            continue;
        }
        if (!o.psi_found) rep.fail(head + " Psi search at r+3sqrt(d) found nothing");
        else if (!o.implication_ok) rep.fail(head + " Psi witness did not transfer to X");
        else ++implications;
        ++ok;
        double reachv = static_cast<double>(o.hit.dist) + rv;
        worst = std::max(worst, reachv);
        rep.slack(Tv - reachv);
        rep.lines.push_back(head + " patch points " + std::to_string(o.patch_points) + " w=" + str(o.hit.w) +
                            " |w'-y|+r=" + fmt(reachv));
    }
    rep.lines.insert(rep.lines.begin(),
                     "r=" + to_string(r) + ", level " + std::to_string(n) + " for r+3sqrt(d), bound R(r+3sqrt d)+sqrt d=" +
                         fmt(Tv) + ", " + std::to_string(ok) + "/" + std::to_string(pairs.size()) +
                         " pairs ok, transfer checked on " + std::to_string(implications));
    rep.data = {{"r", to_string(r)},   {"level", n}, {"bound", Tv}, {"pairs", pairs.size()}, {"ok", ok},
                {"transfers", implications}, {"worst_reach", worst}, {"seed", spec.seed}};
    return rep;
}

Report encoding_report(PaletteEngine& engine, int n, const EncodingOptions& opts) {
    Report rep;
    rep.check = "encoding";
    const auto& s = engine.schedule();
    const int d = s.d();
    if (!s.palette_mode()) throw UsageError("encoding needs a palette-mode schedule");
    if (n < 2 || n > s.n_max()) throw RangeError("encoding level out of range");
    const long long c_prev = s.c(n - 1);
    const long long c_cur = s.c(n);
    if (c_prev < 3) throw UsageError("encoding needs c_{n-1} >= 3");
    const int g = static_cast<int>(s.p(n - 1) - s.p(n - 2));
    const Int t = engine.kept_tiles(n);
    const Int tiles_axis = pow2(g);
    const Int total = checked_pow(tiles_axis, d);

    bool exhaustive = opts.exhaustive;
    if (exhaustive && t > engine.options().alpha_budget) {
        exhaustive = false;
        rep.lines.push_back("kept tiles exceed the alpha budget; sampling " + std::to_string(opts.samples) + " tiles");
    }
    if (!exhaustive) rep.seeds.push_back(opts.seed);

    std::vector<long double> shade_num(static_cast<size_t>(c_prev));
    for (long long a = 1; a < c_prev; ++a)
        shade_num[static_cast<size_t>(a)] = engine.shade_sum({n - 1, a}).convert_to<long double>();
    const int e_tile = d * static_cast<int>(s.p(n - 2));

    double worst = 0;
    long long checked = 0;
    LatticePoint worst_tile(d);
    std::vector<TileAddress> direct;
    auto check_tile = [&](const TileAddress& tile) {
        long long a = engine.alpha_for_tile(tile);
        double integral = engine.density().integrate_box(engine.tile_box(tile));
        long double b = std::ldexp(shade_num[static_cast<size_t>(a)], -e_tile);
        long double mean = std::ldexp(static_cast<long double>(integral), d * g);
        double err = static_cast<double>(std::fabs(b - mean) * static_cast<long double>(c_prev - 2));
        if (err > worst || checked == 0) {
            worst = std::max(worst, err);
            worst_tile = tile.tile;
        }
        if (err > 1.0 + opts.slack)
            rep.fail("tile " + str(tile.tile) + ": normalized error " + fmt(err) + " > 1");
        ++checked;
        if (static_cast<int>(direct.size()) < opts.direct_tiles) direct.push_back(tile);
    };

    if (exhaustive) {
        engine.precompute_alphas(n);
        LatticePoint mi(d);
        for (Int lin = 0; lin < total; ++lin) {
            Int rest = lin;
            for (int i = d - 1; i >= 0; --i) {
                mi[i] = rest % tiles_axis;
                rest /= tiles_axis;
            }
            TileAddress tile = engine.tile_at(n, mi);
            if (!tile.strip) check_tile(tile);
        }
    } else {
        std::mt19937_64 rng(opts.seed);
        for (long long k = 0; k < opts.samples; ++k) {
            LatticePoint mi(d);
            TileAddress tile;
            do {
                for (int i = 0; i < d; ++i) mi[i] = draw(rng, tiles_axis);
                tile = engine.tile_at(n, mi);
            } while (tile.strip);
            check_tile(tile);
        }
    }
    rep.slack(1.0 - worst);

    // Recount a few tile sums cell by cell.
    const Int tile_side = pow2(s.p(n - 2));
    long long recounted = 0;
    if (checked_pow(tile_side, d) <= (Int{1} << 16)) {
        for (const auto& tile : direct) {
            CubicSet cube = engine.tile_cube(tile);
            long long sum = 0;
            for (const auto& cell : natural_partition(cube, 1)) sum += engine.eval_colour({n, c_cur}, cell.base);
            BigInt expect = engine.shade_sum({n - 1, engine.alpha_for_tile(tile)});
            if (BigInt(sum) != expect)
                rep.fail("tile " + str(tile.tile) + ": cell sum " + std::to_string(sum) + " != " + expect.str());
            ++recounted;
        }
    }

    // Excluded strip and the finite conditions behind the weak limit.
    const BigInt strip_blocks = pow(BigInt(c_prev), static_cast<unsigned>(s.D()));
    const Rational leb(strip_blocks * s.D(), big_pow2(static_cast<long long>(d) * g));
    const Rational nu_n(engine.strip_sum(n), big_pow2(static_cast<long long>(d) * s.p(n - 1)));
    Box strip_box;
    for (int i = 0; i < d; ++i) {
        strip_box.lo.emplace_back(0);
        strip_box.hi.emplace_back(i == 0 ? Int{2} * static_cast<Int>(strip_blocks.convert_to<long long>()) : Int{2}, g);
    }
    const double nu = engine.density().integrate_box(strip_box);
    if (to_big(t) + strip_blocks * s.D() != BigInt(to_big(total)))
        rep.fail("kept tiles plus strip tiles do not tile Q_" + std::to_string(n));
    nlohmann::json leb_levels = nlohmann::json::array();
    Rational prev_leb = -1;
    for (int m = 2; m <= s.n_max(); ++m) {
        const int gm = static_cast<int>(s.p(m - 1) - s.p(m - 2));
        Rational lm(pow(BigInt(s.c(m - 1)), static_cast<unsigned>(s.D())) * s.D(), big_pow2(static_cast<long long>(d) * gm));
        if (prev_leb >= 0 && lm > prev_leb) rep.fail("Lebesgue strip mass increases at level " + std::to_string(m));
        prev_leb = lm;
        leb_levels.push_back(to_string(lm));
    }

    rep.lines.push_back("level " + std::to_string(n) + ": " + (exhaustive ? "all " : "sampled ") +
                        std::to_string(checked) + " of " + to_string(t) + " kept tiles");
    rep.lines.push_back("max normalized error " + fmt(worst) + " at tile " + str(worst_tile) +
                        " (bound 1, i.e. 2^{d p_{n-2}}/(c_{n-1}-2) per tile)");
    rep.lines.push_back("cell-by-cell recounts " + std::to_string(recounted));
    rep.lines.push_back("strip Lebesgue mass " + to_string(leb) + " = " + fmt(leb.convert_to<double>()));
    rep.lines.push_back("strip mass of colour sums " + fmt(nu_n.convert_to<double>()) + ", of rho " + fmt(nu));
    rep.lines.push_back("tile diameter sqrt(d)*2^-" + std::to_string(g) + " = " +
                        fmt(std::sqrt(static_cast<double>(d)) * std::ldexp(1.0, -g)));
    rep.data = {{"level", n},
                {"mode", exhaustive ? "exhaustive" : "sampled"},
                {"tiles", checked},
                {"kept_tiles", to_string(t)},
                {"max_normalized_error", worst},
                {"strip_lebesgue", to_string(leb)},
                {"strip_colour_mass", nu_n.convert_to<double>()},
                {"strip_rho_mass", nu},
                {"strip_lebesgue_by_level", leb_levels},
                {"recounted", recounted}};
    return rep;
}

Report check_nesting(const PsiField& field) {
    Report rep;
    rep.check = "nesting";
    const auto& s = field.schedule();
    for (const auto& c : nesting_checks(field)) {
        rep.lines.push_back(c.detail + (c.contained ? " nested" : " NOT nested") + (c.growth ? ", growth ok" : ", growth fails"));
        if (!c.contained) rep.fail("block " + std::to_string(c.level) + " not inside block " + std::to_string(c.level + 1));
        if (!c.growth) rep.fail("growth bound fails at level " + std::to_string(c.level));
        CubicSet b = field.cover_block(c.level);
        long double reach = static_cast<long double>(b.base[0] + b.side);
        long double need = std::ldexp(2.0L / 3.0L, static_cast<int>(s.p(c.level - 1)));
        rep.slack(static_cast<double>((reach - need) / std::ldexp(1.0L, static_cast<int>(s.p(c.level - 1)))));
    }
    rep.data = {{"levels", field.max_cover_level()}};
    return rep;
}

Report verify_level_consistency(const PsiField& field, long long samples, std::uint64_t seed) {
    Report rep;
    rep.check = "level-consistency";
    rep.seeds.push_back(seed);
    const int d = field.d();
    const int top = field.max_psi_level();
    std::mt19937_64 rng(seed);
    long long comparisons = 0;
    for (long long k = 0; k < samples; ++k) {
        int L = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(top));
        CubicSet b = field.cover_block(L);
        LatticePoint x(d);
        for (int i = 0; i < d; ++i) x[i] = b.base[i] + draw(rng, b.side);
        int N = field.minimal_cover_level(x);
        std::uint8_t first = field.psi_at_level(x, N);
        for (int M = N + 1; M <= top; ++M) {
            ++comparisons;
            if (field.psi_at_level(x, M) != first)
                rep.fail("x=" + str(x) + ": block " + std::to_string(M) + " disagrees with block " + std::to_string(N));
        }
    }
    rep.lines.push_back(std::to_string(samples) + " points, " + std::to_string(comparisons) +
                        " cross-level comparisons over blocks 1.." + std::to_string(top));
    rep.data = {{"samples", samples}, {"comparisons", comparisons}};
    return rep;
}

Report verify_partition_claim(const PsiField& field, int n, long long samples, std::uint64_t seed) {
    Report rep;
    rep.check = "partition";
    rep.seeds.push_back(seed);
    const auto& s = field.schedule();
    const int d = field.d();
    PaletteEngine& eng = field.engine();
    if (!eng.materializable(n)) throw CapacityError("level " + std::to_string(n) + " is not materializable");
    const auto& colours = eng.materialize_level(n);
    const int B = field.max_psi_level();
    if (B < n) throw CoverageError("no readable block holds a level-" + std::to_string(n) + " cube");
    CubicSet block = field.cover_block(B);
    const Int side = pow2(s.p(n - 1));
    const Int per_axis = block.side / side;
    std::mt19937_64 rng(seed);
    for (long long k = 0; k < samples; ++k) {
        CubicSet cube{block.base, side};
        for (int i = 0; i < d; ++i) cube.base[i] += draw(rng, per_axis) * side;
        Grid g = field.psi_window(cube);
        bool any = false;
        for (const auto& c : colours) any = any || c == g;
        if (!any) rep.fail("cube at " + str(cube.base) + " is no level-" + std::to_string(n) + " colour");
    }
    rep.lines.push_back(std::to_string(samples) + " cubes of side " + to_string(side) + " from block " +
                        std::to_string(B));
    rep.data = {{"level", n}, {"samples", samples}};
    return rep;
}

Report verify_colour_patches(const PsiField& field) {
    Report rep;
    rep.check = "colour-patches";
    PaletteEngine& eng = field.engine();
    long long checked = 0;
    for (int n = 1; n + 2 <= eng.top_level(); ++n) {
        if (!eng.materializable(n)) {
            rep.lines.push_back("level " + std::to_string(n) + " skipped (not materializable)");
            continue;
        }
        for (long long j = 1; j <= eng.colours(n); ++j) {
            CubicSet T = field.locate_colour_patch(n, j);
            if (field.psi_window(T) != eng.materialize_level(n)[static_cast<size_t>(j - 1)])
                rep.fail("T_{" + std::to_string(n) + "," + std::to_string(j) + "} at " + str(T.base) + " differs");
            rep.lines.push_back("T_{" + std::to_string(n) + "," + std::to_string(j) + "} at " + str(T.base) +
                                " side " + to_string(T.side));
            ++checked;
        }
    }
    rep.data = {{"patches", checked}};
    return rep;
}

Report verify_goodness(PaletteEngine& engine, long long samples, std::uint64_t seed) {
    Report rep;
    rep.check = "goodness";
    rep.seeds.push_back(seed);
    nlohmann::json levels = nlohmann::json::array();
    for (int n = 2; n <= engine.top_level(); ++n) {
        GoodnessReport g;
        if (engine.materializable(n) && engine.materializable(n - 1)) {
            g = engine.check_goodness(n);
        } else if (engine.materializable(n - 1)) {
            g = engine.check_goodness_sampled(n, samples, seed + static_cast<std::uint64_t>(n));
        } else {
            rep.lines.push_back("level " + std::to_string(n) + " skipped (level " + std::to_string(n - 1) +
                                " not materializable)");
            continue;
        }
        rep.lines.push_back("level " + std::to_string(n) + " " + g.mode + ": (A) " + (g.condition_a ? "ok" : "FAILS") +
                            ", (B) " + (g.condition_b ? "ok" : "FAILS") + ", " + std::to_string(g.tiles_checked) +
                            " tiles, " + std::to_string(g.points_checked) + " points");
        for (const auto& f : g.failures) rep.fail("level " + std::to_string(n) + " " + f);
        if (!g.pass() && g.failures.empty()) rep.fail("level " + std::to_string(n));
        levels.push_back({{"level", n}, {"mode", g.mode}, {"a", g.condition_a}, {"b", g.condition_b},
                          {"tiles", g.tiles_checked}, {"points", g.points_checked}});
    }
    rep.data = {{"levels", levels}};
    return rep;
}

nlohmann::json combine(const std::vector<Report>& reports) {
    bool pass = true;
    bool have = false;
    double worst = 0;
    std::set<std::uint64_t> seeds;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : reports) {
        pass = pass && r.pass;
        if (r.has_slack && (!have || r.worst_slack < worst)) {
            worst = r.worst_slack;
            have = true;
        }
        seeds.insert(r.seeds.begin(), r.seeds.end());
        list.push_back(r.trailer());
    }
    nlohmann::json j = {{"pass", pass}, {"seeds", seeds}, {"reports", list}};
    j["worst_slack"] = have ? nlohmann::json(worst) : nlohmann::json(nullptr);
    return j;
}

}  // namespace delone
