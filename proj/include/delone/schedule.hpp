#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "delone/bignum.hpp"
#include "delone/lattice.hpp"

namespace delone {

// The sequences p_0 = 0 < p_1 < ... < p_{n_max} and c_1, ..., c_{n_max} that
// size every level of the construction. Levels are 1-based.
class LevelSchedule {
public:
    LevelSchedule() = default;
    LevelSchedule(int d, std::vector<long long> p, std::vector<long long> c, bool palette_mode);

    int d() const { return d_; }
    int D() const { return 1 << d_; }
    int n_max() const { return static_cast<int>(c_.size()); }
    bool palette_mode() const { return palette_mode_; }

    long long p(int n) const;  // 0 <= n <= n_max
    long long c(int n) const;  // 1 <= n <= n_max
    long long gap(int n) const { return p(n) - p(n - 1); }

    const std::vector<long long>& p_values() const { return p_; }
    const std::vector<long long>& c_values() const { return c_; }

    nlohmann::json to_json() const;
    static LevelSchedule from_json(const nlohmann::json& j);
    std::string canonical() const { return to_json().dump(); }
    std::string hash() const;

    bool operator==(const LevelSchedule&) const = default;

private:
    int d_ = 2;
    std::vector<long long> p_{0};
    std::vector<long long> c_;
    bool palette_mode_ = false;
};

struct ScheduleCheck {
    std::string name;
    int level = 0;
    bool pass = true;
    std::string slack;  // exact value of (allowed - actual); negative on failure
    std::string detail;
};

struct ValidationReport {
    std::vector<ScheduleCheck> checks;

    bool valid() const;
    std::vector<ScheduleCheck> failures() const;
    std::string text() const;
};

ValidationReport validate_schedule(const LevelSchedule& sched, bool palette_mode);
inline ValidationReport validate_schedule(const LevelSchedule& sched) {
    return validate_schedule(sched, sched.palette_mode());
}

// Throws UsageError carrying the first failure when the schedule is invalid.
void require_valid(const LevelSchedule& sched);

// Exact prefix sum  sum_{i<=m} c_i^D 2^{-d(p_i - p_{i-1} - 1)}.
Rational strip_mass_prefix(const LevelSchedule& sched, int m);

struct DerivedLevel {
    int n = 0;
    long long gap = 0;  // p_{n-1} - p_{n-2}
    BigInt t;           // kept tiles
    BigInt h;           // step size
    long long alpha = 0;
};

DerivedLevel derive_level(const LevelSchedule& sched, int n);

// Same formulas on raw inputs; exposed for the synthetic cases in the tests.
DerivedLevel derive_from(const BigInt& t, long long c_prev, long long c_cur);

CubicSet strip_block(const LevelSchedule& sched, int n, Int i);

struct BkSchedule {
    LevelSchedule schedule;
    double k_series = 0;  // truncated series times the safety factor
    double k = 0;         // constant actually used
    std::vector<double> eps;  // eps[n] for 1 <= n <= n_max; eps[0] unused
};

BkSchedule bk_schedule(int d, int n_max);

struct WitnessCheck {
    int n = 0;
    bool applicable = false;  // side conditions p_{n-2} > 3 and 2(1+eps_{n-1})/d < q
    bool holds = false;
    double lhs_log2 = 0;      // p_n - p_{n-2}
    double rhs_log2 = 0;      // log2(4 K^{2/d} n^q)
};

// 2^{p_n - p_{n-2}} <= 4 K^{2/d} n^q at level n.
WitnessCheck growth_witness(const BkSchedule& bk, int n, double q);

std::string fnv1a_hex(const std::string& data);

}  // namespace delone
