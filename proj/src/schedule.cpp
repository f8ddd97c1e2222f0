#include "delone/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace delone {

namespace {

constexpr long long kMaxExponent = 123;  // keeps 2^{p_n + 2} inside the signed 128-bit range

}  // namespace

LevelSchedule::LevelSchedule(int d, std::vector<long long> p, std::vector<long long> c, bool palette_mode)
    : d_(d), p_(std::move(p)), c_(std::move(c)), palette_mode_(palette_mode) {
    if (d_ < 2 || d_ > kMaxDim) throw UsageError("dimension must be in [2, " + std::to_string(kMaxDim) + "]");
    if (p_.empty() || p_[0] != 0) throw UsageError("p must start with p_0 = 0");
    if (c_.empty()) throw UsageError("schedule needs at least one level");
    if (p_.size() != c_.size() + 1) throw UsageError("p must have exactly one more entry than c");
}

long long LevelSchedule::p(int n) const {
    if (n < 0 || n > n_max()) throw RangeError("p_" + std::to_string(n) + " not in schedule");
    return p_[static_cast<size_t>(n)];
}

long long LevelSchedule::c(int n) const {
    if (n < 1 || n > n_max()) throw RangeError("c_" + std::to_string(n) + " not in schedule");
    return c_[static_cast<size_t>(n - 1)];
}

nlohmann::json LevelSchedule::to_json() const {
    return {{"d", d_}, {"p", p_}, {"c", c_}, {"mode", palette_mode_ ? "palette" : "plain"}};
}

LevelSchedule LevelSchedule::from_json(const nlohmann::json& j) {
    try {
        std::string mode = j.value("mode", std::string("palette"));
        if (mode != "palette" && mode != "plain") throw ConfigError("schedule mode must be 'palette' or 'plain'");
        return LevelSchedule(j.at("d").get<int>(), j.at("p").get<std::vector<long long>>(),
                             j.at("c").get<std::vector<long long>>(), mode == "palette");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad schedule: ") + e.what());
    } catch (const UsageError& e) {
        throw ConfigError(std::string("bad schedule: ") + e.what());
    }
}

std::string LevelSchedule::hash() const { return fnv1a_hex(canonical()); }

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool ValidationReport::valid() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::vector<ScheduleCheck> ValidationReport::failures() const {
    std::vector<ScheduleCheck> out;
    for (const auto& c : checks)
        if (!c.pass) out.push_back(c);
    return out;
}

std::string ValidationReport::text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << "n=" << c.level << "  " << c.name << "  slack=" << c.slack;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    return os.str();
}

Rational strip_mass_prefix(const LevelSchedule& s, int m) {
    Rational sum = 0;
    const BigInt D = s.D();
    for (int i = 1; i <= m; ++i) {
        BigInt num = pow(BigInt(s.c(i)), static_cast<unsigned>(s.D()));
        long long e = static_cast<long long>(s.d()) * (s.gap(i) - 1);
        if (e >= 0)
            sum += Rational(num, big_pow2(e));
        else
            sum += Rational(num * big_pow2(-e));
    }
    return sum;
}

ValidationReport validate_schedule(const LevelSchedule& s, bool palette_mode) {
    ValidationReport rep;
    auto add = [&](std::string name, int level, bool pass, std::string slack, std::string detail = {}) {
        rep.checks.push_back({std::move(name), level, pass, std::move(slack), std::move(detail)});
    };
    const unsigned D = static_cast<unsigned>(s.D());

    for (int n = 1; n <= s.n_max(); ++n) {
        long long gap = s.gap(n);
        add("p_n - p_{n-1} >= 2", n, gap >= 2, std::to_string(gap - 2));
        add("c_n >= 2", n, s.c(n) >= 2, std::to_string(s.c(n) - 2));
        if (gap >= 1) {
            BigInt room = big_pow2(gap - 1);
            BigInt used = pow(BigInt(s.c(n)), D);
            add("c_n^D <= 2^{p_n - p_{n-1} - 1}", n, used <= room, BigInt(room - used).str(),
                "c_n^D = " + used.str());
        } else {
            add("c_n^D <= 2^{p_n - p_{n-1} - 1}", n, false, "-inf", "non-increasing p");
        }
    }
    long long top = s.p(s.n_max());
    add("2^{p_{n_max}+2} fits the coordinate width", s.n_max(), top <= kMaxExponent,
        std::to_string(kMaxExponent - top));

    if (palette_mode) {
        add("c_1 = 3", 1, s.c(1) == 3, std::to_string(3 - s.c(1)));
        for (int n = 2; n <= s.n_max(); ++n) {
            add("c_n >= 3", n, s.c(n) >= 3, std::to_string(s.c(n) - 3));
            if (s.c(n - 1) >= 2) {
                BigInt cap = BigInt(s.D()) * pow(BigInt(s.c(n - 1) - 2), D + 1) + 2;
                add("c_n <= D(c_{n-1}-2)^{D+1}+2", n, BigInt(s.c(n)) <= cap, BigInt(cap - s.c(n)).str());
            }
        }
        const Rational third(1, 3);
        for (int m = 1; m <= s.n_max(); ++m) {
            if (s.gap(m) < 1) break;
            Rational sum = strip_mass_prefix(s, m);
            add("sum_{i<=m} c_i^D 2^{-d(p_i-p_{i-1}-1)} <= 1/3", m, sum <= third, to_string(Rational(third - sum)));
        }
    }
    return rep;
}

void require_valid(const LevelSchedule& s) {
    auto rep = validate_schedule(s);
    auto bad = rep.failures();
    if (!bad.empty())
        throw UsageError("invalid schedule at level " + std::to_string(bad.front().level) + ": " + bad.front().name);
}

DerivedLevel derive_from(const BigInt& t, long long c_prev, long long c_cur) {
    if (c_prev < 3 || c_cur < 3) throw UsageError("derived quantities need c_{n-1}, c_n >= 3");
    if (t < 1) throw UsageError("t_n must be positive");
    DerivedLevel out;
    BigInt num = t * (c_prev - 2);
    BigInt den = c_cur - 2;
    out.t = t;
    out.h = (num + den - 1) / den;
    // alpha (h-1) + (c_n - 2 - alpha) h = t (c_{n-1} - 2)  =>  alpha = (c_n - 2) h - t (c_{n-1} - 2)
    out.alpha = static_cast<long long>(BigInt(den * out.h - num));
    return out;
}

DerivedLevel derive_level(const LevelSchedule& s, int n) {
    if (n < 2 || n > s.n_max()) throw UsageError("derive_level needs 2 <= n <= n_max");
    require_valid(s);
    long long g = s.gap(n - 1);
    BigInt t = big_pow2(static_cast<long long>(s.d()) * g) -
               BigInt(s.D()) * pow(BigInt(s.c(n - 1)), static_cast<unsigned>(s.D()));
    DerivedLevel out = derive_from(t, s.c(n - 1), s.c(n));
    out.n = n;
    out.gap = g;
    return out;
}

CubicSet strip_block(const LevelSchedule& s, int n, Int i) {
    Int count = checked_pow(s.c(n), s.D());
    if (i < 1 || i > count) throw RangeError("strip block index out of range");
    Int side = pow2(s.p(n - 1) + 1);
    CubicSet block{LatticePoint(s.d()), side};
    block.base[0] = checked_mul(side, i - 1);
    return block;
}

BkSchedule bk_schedule(int d, int n_max) {
    if (d < 2 || d > kMaxDim) throw UsageError("bk schedule needs d >= 2");
    if (n_max < 1) throw UsageError("bk schedule needs n_max >= 1");
    const int D = 1 << d;
    const double inv = 1.0 - 1.0 / d;
    auto eps = [&](long long n) { return 1.0 / (inv * std::log(std::log(static_cast<double>(n) + 100.0))); };

    long double series = 0;
    for (long long n = 1000000; n >= 1; --n)  // smallest terms first
        series += std::pow(static_cast<long double>(n), -(1.0L + eps(n) * inv));
    BkSchedule out;
    out.k_series = 2.0 * static_cast<double>(D) * std::pow(3.0, D + 1) * static_cast<double>(series);
    // (1/2) K^{1/d} >= 3^D is what makes c_n^D fit; see README.
    const double k_floor = std::pow(2.0 * std::pow(3.0, D), d);
    out.k = std::max(out.k_series, k_floor);

    std::vector<long long> p{0};
    std::vector<long long> c;
    out.eps.assign(static_cast<size_t>(n_max) + 1, 0.0);
    for (int n = 1; n <= n_max; ++n) {
        double e = eps(n);
        out.eps[static_cast<size_t>(n)] = e;
        long double a = (std::log2(static_cast<long double>(out.k)) + (1.0L + e) * std::log2(static_cast<long double>(n))) / d;
        long double fl = std::floor(a);
        // Certify the floor: the fractional part must stay clear of 0 and 1 by
        // far more than the rounding error of the log evaluation.
        long double frac = a - fl;
        if (frac < 1e-9L || frac > 1.0L - 1e-9L)
            throw InvariantError("floor of log2 too close to an integer at level " + std::to_string(n));
        long long next = p.back() + 1 + static_cast<long long>(fl);
        if (next > kMaxExponent) throw CapacityError("bk schedule level " + std::to_string(n) + " exceeds the coordinate width");
        p.push_back(next);

        if (n == 1) {
            c.push_back(3);
        } else {
            long long shade_steps = 3 * static_cast<long long>(std::floor(std::pow(static_cast<double>(n), e / (D * d))));
            BigInt cap = BigInt(D) * pow(BigInt(c.back() - 2), static_cast<unsigned>(D + 1)) + 2;
            c.push_back(BigInt(shade_steps) <= cap ? shade_steps : static_cast<long long>(cap));
        }
    }
    out.schedule = LevelSchedule(d, std::move(p), std::move(c), true);
    return out;
}

WitnessCheck growth_witness(const BkSchedule& bk, int n, double q) {
    const auto& s = bk.schedule;
    WitnessCheck w;
    w.n = n;
    if (n < 2 || n > s.n_max()) return w;
    const int d = s.d();
    w.applicable = s.p(n - 2) > 3 && 2.0 * (1.0 + bk.eps[static_cast<size_t>(n - 1)]) / d < q;
    w.lhs_log2 = static_cast<double>(s.p(n) - s.p(n - 2));
    w.rhs_log2 = 2.0 + (2.0 / d) * std::log2(bk.k) + q * std::log2(static_cast<double>(n));
    w.holds = w.lhs_log2 <= w.rhs_log2;
    return w;
}

}  // namespace delone
