#include "delone/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "delone/schedule.hpp"

namespace delone {

namespace {

void warn_clamped() {
    static std::once_flag once;
    std::call_once(once, [] { std::clog << "warning: density value clamped to [4/3, 5/3]\n"; });
}

long long cell_index(double x, int depth) {
    long long n = 1LL << depth;
    return std::clamp(static_cast<long long>(std::floor(x * static_cast<double>(n))), 0LL, n - 1);
}

}  // namespace

DensityFn DensityFn::constant(double value) {
    DensityFn f;
    f.kind_ = Kind::Constant;
    f.params_ = {value};
    return f;
}

DensityFn DensityFn::affine(double a, double b) {
    DensityFn f;
    f.kind_ = Kind::Affine;
    f.params_ = {a, b};
    return f;
}

DensityFn DensityFn::checkerboard(int depth, double lo, double hi) {
    if (depth < 0 || depth > 20) throw UsageError("checkerboard depth out of range");
    DensityFn f;
    f.kind_ = Kind::Checkerboard;
    f.depth_ = depth;
    f.params_ = {lo, hi};
    return f;
}

DensityFn DensityFn::oscillating(int depth) {
    if (depth < 1 || depth > 20) throw UsageError("oscillating depth out of range");
    DensityFn f;
    f.kind_ = Kind::Oscillating;
    f.depth_ = depth;
    return f;
}

DensityFn DensityFn::table(int dim, int depth, std::vector<double> values) {
    if (dim < 1 || dim > kMaxDim || depth < 0 || depth * dim > 26) throw UsageError("table density shape out of range");
    size_t expect = size_t{1} << (depth * dim);
    if (values.size() != expect)
        throw UsageError("table density needs " + std::to_string(expect) + " values, got " + std::to_string(values.size()));
    DensityFn f;
    f.kind_ = Kind::Table;
    f.depth_ = depth;
    f.table_dim_ = dim;
    f.params_ = std::move(values);
    return f;
}

DensityFn DensityFn::load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open density table '" + path + "'");
    std::string line;
    int depth = -1;
    int dim = 2;
    std::vector<double> values;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (depth < 0) {
            // header: "depth K [dim d]"
            if (word != "depth" || !(ls >> depth)) throw ConfigError("density table must start with 'depth K'");
            if (ls >> word) {
                if (word != "dim" || !(ls >> dim)) throw ConfigError("bad density table header");
            }
            continue;
        }
        std::istringstream vs(line);
        double v;
        while (vs >> v) values.push_back(v);
        if (!vs.eof()) throw ConfigError("non-numeric entry in density table");
    }
    if (depth < 0) throw ConfigError("density table has no header");
    try {
        return table(dim, depth, std::move(values));
    } catch (const UsageError& e) {
        throw ConfigError(e.what());
    }
}

DensityFn DensityFn::from_json(const nlohmann::json& spec) {
    try {
        std::string kind = spec.at("kind").get<std::string>();
        const auto params = spec.value("params", nlohmann::json::object());
        int depth = spec.value("depth", 0);
        if (kind == "constant") return constant(params.value("value", 1.5));
        if (kind == "affine") return affine(params.value("a", kDensityLo), params.value("b", 1.0 / 3.0));
        if (kind == "checkerboard")
            return checkerboard(depth, params.value("lo", kDensityLo), params.value("hi", kDensityHi));
        if (kind == "oscillating") return oscillating(depth);
        if (kind == "table") {
            if (params.contains("path")) return load_table(params.at("path").get<std::string>());
            return table(params.value("dim", 2), depth, params.at("values").get<std::vector<double>>());
        }
        throw ConfigError("unknown density kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad density spec: ") + e.what());
    } catch (const UsageError& e) {
        throw ConfigError(std::string("bad density spec: ") + e.what());
    }
}

nlohmann::json DensityFn::to_json() const {
    switch (kind_) {
        case Kind::Constant: return {{"kind", "constant"}, {"params", {{"value", params_[0]}}}, {"depth", 0}};
        case Kind::Affine: return {{"kind", "affine"}, {"params", {{"a", params_[0]}, {"b", params_[1]}}}, {"depth", 0}};
        case Kind::Checkerboard:
            return {{"kind", "checkerboard"}, {"params", {{"lo", params_[0]}, {"hi", params_[1]}}}, {"depth", depth_}};
        case Kind::Oscillating: return {{"kind", "oscillating"}, {"params", nlohmann::json::object()}, {"depth", depth_}};
        case Kind::Table:
            return {{"kind", "table"}, {"params", {{"dim", table_dim_}, {"values", params_}}}, {"depth", depth_}};
    }
    return {};
}

std::string DensityFn::hash() const { return fnv1a_hex(to_json().dump()); }

double DensityFn::raw(std::span<const double> x) const {
    switch (kind_) {
        case Kind::Constant: return params_[0];
        case Kind::Affine: return std::clamp(params_[0] + params_[1] * x[0], kDensityLo, kDensityHi);
        case Kind::Checkerboard: {
            long long s = 0;
            for (double xi : x) s += cell_index(xi, depth_);
            return (s % 2 == 0) ? params_[0] : params_[1];
        }
        case Kind::Oscillating: {
            double acc = 0;
            for (int l = 1; l <= depth_; ++l) {
                long long s = 0;
                for (double xi : x) s += cell_index(xi, l);
                if (s % 2 == 1) acc += std::ldexp(1.0, -l);
            }
            return kDensityLo + (1.0 / 3.0) * acc / (1.0 - std::ldexp(1.0, -depth_));
        }
        case Kind::Table: {
            if (static_cast<int>(x.size()) != table_dim_) throw DomainError("table density dimension mismatch");
            size_t idx = 0;
            for (double xi : x) idx = (idx << depth_) | static_cast<size_t>(cell_index(xi, depth_));
            return params_[idx];
        }
    }
    return 0;
}

double DensityFn::eval(std::span<const double> x) const {
    for (double xi : x)
        if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("density evaluated outside [0,1]^d");
    double v = raw(x);
    if (v < kDensityLo || v > kDensityHi) {
        warn_clamped();
        v = std::clamp(v, kDensityLo, kDensityHi);
    }
    return v;
}

double DensityFn::integrate_box(const Box& box, double tol) const {
    const int d = box.dim();
    std::vector<double> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        lo[static_cast<size_t>(i)] = box.lo[static_cast<size_t>(i)].to_double();
        hi[static_cast<size_t>(i)] = box.hi[static_cast<size_t>(i)].to_double();
        if (lo[static_cast<size_t>(i)] < 0.0 || hi[static_cast<size_t>(i)] > 1.0)
            throw DomainError("integration box leaves [0,1]^d");
    }
    if (box.empty()) return 0.0;
    if (kind_ == Kind::Constant) {
        double v = eval(lo);
        return v * box.volume().to_double();
    }
    if (exact_dyadic()) return integrate_dyadic(lo, hi);
    return integrate_adaptive(lo, hi, tol);
}

double DensityFn::integrate_dyadic(std::span<const double> lo, std::span<const double> hi) const {
    const int d = static_cast<int>(lo.size());
    const double cell = std::ldexp(1.0, -depth_);
    std::array<long long, kMaxDim> first{}, last{}, idx{};
    for (int i = 0; i < d; ++i) {
        first[static_cast<size_t>(i)] = cell_index(lo[static_cast<size_t>(i)], depth_);
        last[static_cast<size_t>(i)] =
            std::max(first[static_cast<size_t>(i)],
                     static_cast<long long>(std::ceil(hi[static_cast<size_t>(i)] / cell)) - 1);
        idx[static_cast<size_t>(i)] = first[static_cast<size_t>(i)];
    }
    std::vector<double> mid(static_cast<size_t>(d));
    double total = 0;
    while (true) {
        double w = 1;
        for (int i = 0; i < d; ++i) {
            double a = std::max(lo[static_cast<size_t>(i)], static_cast<double>(idx[static_cast<size_t>(i)]) * cell);
            double b = std::min(hi[static_cast<size_t>(i)], static_cast<double>(idx[static_cast<size_t>(i)] + 1) * cell);
            w *= std::max(0.0, b - a);
            mid[static_cast<size_t>(i)] = (static_cast<double>(idx[static_cast<size_t>(i)]) + 0.5) * cell;
        }
        if (w > 0) total += w * eval(mid);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<size_t>(i)] <= last[static_cast<size_t>(i)]) break;
            idx[static_cast<size_t>(i)] = first[static_cast<size_t>(i)];
        }
        if (i < 0) break;
    }
    return total;
}

double DensityFn::integrate_adaptive(std::span<const double> lo, std::span<const double> hi, double tol) const {
    const int d = static_cast<int>(lo.size());
    double vol = 1;
    for (int i = 0; i < d; ++i) vol *= hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
    std::vector<double> x(static_cast<size_t>(d));
    double prev = 0;
    for (int level = 0;; ++level) {
        long long per_axis = 1LL << level;
        long long cells = 1;
        for (int i = 0; i < d; ++i) cells *= per_axis;
        if (cells > kRefinementCap) throw IntegrationError("adaptive quadrature did not converge", prev);
        std::array<long long, kMaxDim> idx{};
        double sum = 0;
        for (long long n = 0; n < cells; ++n) {
            for (int i = 0; i < d; ++i) {
                double h = (hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)]) / static_cast<double>(per_axis);
                x[static_cast<size_t>(i)] = lo[static_cast<size_t>(i)] + (static_cast<double>(idx[static_cast<size_t>(i)]) + 0.5) * h;
            }
            sum += eval(x);
            for (int i = d - 1; i >= 0; --i) {
                if (++idx[static_cast<size_t>(i)] < per_axis) break;
                idx[static_cast<size_t>(i)] = 0;
            }
        }
        double est = vol * sum / static_cast<double>(cells);
        if (level > 0 && std::abs(est - prev) <= tol * std::abs(est)) return est;
        prev = est;
    }
}

}  // namespace delone
