#include "delone/delone_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

namespace delone {

namespace {

using Key = std::vector<long long>;

Key cell_key(const RealPoint& p) {
    Key k;
    for (const auto& c : p) k.push_back(static_cast<long long>(c.floor()));
    return k;
}

Dyadic dist_sq(const RealPoint& a, const RealPoint& b) {
    Dyadic s;
    for (size_t i = 0; i < a.size(); ++i) {
        Dyadic t = a[i] - b[i];
        s = s + t * t;
    }
    return s;
}

bool inside(const RealPoint& p, const std::vector<Dyadic>& lo, const std::vector<Dyadic>& hi) {
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] < lo[i] || !(p[i] < hi[i])) return false;
    return true;
}

// Visits every key within Chebyshev distance `reach` of `k`.
template <class F>
void around(const Key& k, long long reach, F&& f) {
    Key q = k;
    const size_t d = k.size();
    for (size_t i = 0; i < d; ++i) q[i] = k[i] - reach;
    while (true) {
        f(q);
        size_t i = d;
        while (i-- > 0) {
            if (++q[i] <= k[i] + reach) break;
            q[i] = k[i] - reach;
        }
        if (i == static_cast<size_t>(-1)) return;
    }
}

}  // namespace

MarkerSets MarkerSets::standard(int d) {
    if (d < 1 || d > kMaxDim) throw UsageError("dimension out of range");
    MarkerSets m;
    m.d = d;
    RealPoint half(static_cast<size_t>(d), Dyadic(1, 1));
    m.t1 = {half};
    RealPoint a = half, b = half;
    a[0] = Dyadic(1, 2);
    b[0] = Dyadic(3, 2);
    m.t2 = {a, b};
    return m;
}

MarkerSets MarkerSets::custom(int d, std::vector<RealPoint> t1, std::vector<RealPoint> t2) {
    MarkerSets m;
    m.d = d;
    m.t1 = std::move(t1);
    m.t2 = std::move(t2);
    m.validate();
    return m;
}

void MarkerSets::validate() const {
    for (const auto* set : {&t1, &t2}) {
        if (set->empty()) throw ConfigError("marker set is empty");
        for (size_t a = 0; a < set->size(); ++a) {
            const RealPoint& p = (*set)[a];
            if (static_cast<int>(p.size()) != d) throw ConfigError("marker point has the wrong dimension");
            for (const auto& c : p)
                if (!(Dyadic(0) < c && c < Dyadic(1)))
                    throw ConfigError("marker point touches the cell boundary (separation condition fails)");
            for (size_t b = a + 1; b < set->size(); ++b)
                if (p == (*set)[b]) throw ConfigError("marker set repeats a point (separation condition fails)");
        }
    }
}

PointWindow points_in_window(const PsiField& field, const Box& window, const MarkerSets& markers) {
    const int d = field.d();
    if (window.dim() != d || markers.d != d) throw UsageError("window dimension mismatch");
    PointWindow pw;
    pw.window = window;
    pw.hash = field.hash();
    if (window.empty()) return pw;

    // Cells z with the closed cell [z, z+1]^d meeting [lo, hi).
    LatticePoint zlo(d), zhi(d);
    Int extent = 0;
    for (int i = 0; i < d; ++i) {
        zlo[i] = window.lo[static_cast<size_t>(i)].ceil() - 1;
        zhi[i] = window.hi[static_cast<size_t>(i)].ceil();
        extent = std::max(extent, zhi[i] - zlo[i]);
    }
    Grid values;
    bool have_grid = false;
    try {
        values = field.psi_window(CubicSet{zlo, extent});
        have_grid = true;
    } catch (const CapacityError&) {
    }

    LatticePoint z = zlo;
    while (true) {
        std::uint8_t v = have_grid ? values.at(z - zlo) : field.psi(z);
        for (const auto& t : markers.of(v)) {
            RealPoint p(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) p[static_cast<size_t>(i)] = Dyadic(z[i]) + t[static_cast<size_t>(i)];
            if (inside(p, window.lo, window.hi)) pw.points.push_back(std::move(p));
        }
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++z[i] < zhi[i]) break;
            z[i] = zlo[i];
        }
        if (i < 0) break;
    }
    std::sort(pw.points.begin(), pw.points.end());
    return pw;
}

DeloneConstants delone_constants(const PointWindow& pw, const Dyadic& margin) {
    const int d = pw.window.dim();
    if (margin * margin < Dyadic(d)) throw UsageError("margin must be at least sqrt(d)");
    std::vector<Dyadic> lo(pw.window.lo), hi(pw.window.hi);
    for (int i = 0; i < d; ++i) {
        lo[static_cast<size_t>(i)] = lo[static_cast<size_t>(i)] + margin;
        hi[static_cast<size_t>(i)] = hi[static_cast<size_t>(i)] - margin;
    }
    std::vector<const RealPoint*> interior;
    std::map<Key, std::vector<const RealPoint*>> all_buckets, in_buckets;
    for (const auto& p : pw.points) {
        all_buckets[cell_key(p)].push_back(&p);
        if (inside(p, lo, hi)) {
            interior.push_back(&p);
            in_buckets[cell_key(p)].push_back(&p);
        }
    }
    if (interior.size() < 2)
        throw DegenerateInputError("need at least two points inside the margin, found " +
                                   std::to_string(interior.size()));

    DeloneConstants out;
    out.interior_points = static_cast<long long>(interior.size());
    bool found = false;
    Dyadic best;
    for (const RealPoint* p : interior) {
        around(cell_key(*p), 1, [&](const Key& k) {
            auto it = in_buckets.find(k);
            if (it == in_buckets.end()) return;
            for (const RealPoint* q : it->second) {
                if (q == p) continue;
                Dyadic s = dist_sq(*p, *q);
                if (!found || s < best) {
                    best = s;
                    found = true;
                }
            }
        });
    }
    if (!found || Dyadic(1) < best) {
        // Neighbours farther than one cell: settle it by brute force.
        found = false;
        for (size_t a = 0; a < interior.size(); ++a)
            for (size_t b = a + 1; b < interior.size(); ++b) {
                Dyadic s = dist_sq(*interior[a], *interior[b]);
                if (!found || s < best) {
                    best = s;
                    found = true;
                }
            }
    }
    out.separation_sq = best;
    out.separation = std::sqrt(best.to_double());

    // Probes on the quarter grid lo + k/4 inside the interior box.
    std::vector<long long> count(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        Dyadic span = hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
        count[static_cast<size_t>(i)] = static_cast<long long>((span * Dyadic(4)).ceil());
    }
    std::vector<long long> k(static_cast<size_t>(d), 0);
    Dyadic worst;
    while (true) {
        RealPoint probe(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) probe[static_cast<size_t>(i)] = lo[static_cast<size_t>(i)] + Dyadic(k[static_cast<size_t>(i)], 2);
        bool have = false;
        Dyadic nearest;
        for (long long reach = 1; !have || Dyadic(reach - 1) * Dyadic(reach - 1) < nearest; ++reach) {
            if (reach > 64) throw DegenerateInputError("probe has no point within 64 cells");
            Key c = cell_key(probe);
            around(c, reach, [&](const Key& key) {
                auto it = all_buckets.find(key);
                if (it == all_buckets.end()) return;
                for (const RealPoint* q : it->second) {
                    Dyadic s = dist_sq(probe, *q);
                    if (!have || s < nearest) {
                        nearest = s;
                        have = true;
                    }
                }
            });
        }
        if (out.probes == 0 || worst < nearest) worst = nearest;
        ++out.probes;
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++k[static_cast<size_t>(i)] < count[static_cast<size_t>(i)]) break;
            k[static_cast<size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    out.covering_radius_sq = worst;
    out.covering_radius = std::sqrt(worst.to_double());
    return out;
}

std::string points_csv(const PointWindow& pw) {
    const int d = pw.window.dim();
    std::string out;
    for (int i = 0; i < d; ++i) out += (i ? ",x" : "x") + std::to_string(i + 1);
    out += "\n";
    for (const auto& p : pw.points) {
        for (size_t i = 0; i < p.size(); ++i) {
            if (i) out += ",";
            out += p[i].to_decimal();
        }
        out += "\n";
    }
    return out;
}

void write_points_csv(const PointWindow& pw, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << points_csv(pw);
}

std::string points_metadata(const PointWindow& pw, const PsiField& field) {
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    for (const auto& v : pw.window.lo) lo.push_back(v.to_decimal());
    for (const auto& v : pw.window.hi) hi.push_back(v.to_decimal());
    nlohmann::json meta = {
        {"hash", pw.hash},
        {"schedule_hash", field.schedule().hash()},
        {"density_hash", field.engine().density().hash()},
        {"schedule", field.schedule().to_json()},
        {"density", field.engine().density().to_json()},
        {"window", {{"lo", lo}, {"hi", hi}}},
        {"count", pw.points.size()},
    };
    return meta.dump(2) + "\n";
}

}  // namespace delone
