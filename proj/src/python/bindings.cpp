#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "delone/verifier.hpp"

namespace py = pybind11;
using namespace delone;

namespace {

LatticePoint point(const std::vector<long long>& v) {
    LatticePoint p(static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) p[static_cast<int>(i)] = v[i];
    return p;
}

std::vector<long long> coords(const LatticePoint& p) {
    std::vector<long long> out;
    for (int i = 0; i < p.dim(); ++i) out.push_back(static_cast<long long>(p[i]));
    return out;
}

py::array_t<std::uint8_t> to_array(const Grid& g) {
    std::vector<py::ssize_t> shape(static_cast<size_t>(g.d), static_cast<py::ssize_t>(g.side));
    py::array_t<std::uint8_t> a(shape);
    std::copy(g.values.begin(), g.values.end(), a.mutable_data());
    return a;
}

py::object fraction(const Rational& q) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(py::int_(py::str(numerator(q).str())), py::int_(py::str(denominator(q).str())));
}

py::object json_obj(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<Dyadic> dyadics(const std::vector<std::string>& v) {
    std::vector<Dyadic> out;
    for (const auto& s : v) out.push_back(Dyadic::parse(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact palette construction and repetitive Delone sets";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<LevelSchedule>(m, "Schedule")
        .def(py::init<int, std::vector<long long>, std::vector<long long>, bool>(), py::arg("d"), py::arg("p"),
             py::arg("c"), py::arg("palette") = true)
        .def_static("from_json", [](const std::string& s) { return LevelSchedule::from_json(nlohmann::json::parse(s)); })
        .def_static("bk", [](int d, int n_max) { return bk_schedule(d, n_max).schedule; }, py::arg("d"), py::arg("n_max"))
        .def_property_readonly("d", &LevelSchedule::d)
        .def_property_readonly("n_max", &LevelSchedule::n_max)
        .def_property_readonly("p", &LevelSchedule::p_values)
        .def_property_readonly("c", &LevelSchedule::c_values)
        .def_property_readonly("palette", &LevelSchedule::palette_mode)
        .def("hash", &LevelSchedule::hash)
        .def("to_json", [](const LevelSchedule& s) { return s.to_json().dump(); })
        .def("validate", [](const LevelSchedule& s) {
            py::list out;
            for (const auto& c : validate_schedule(s).checks)
                out.append(py::dict(py::arg("name") = c.name, py::arg("level") = c.level, py::arg("pass") = c.pass,
                                    py::arg("slack") = c.slack));
            return out;
        })
        .def("derive", [](const LevelSchedule& s, int n) {
            auto dl = derive_level(s, n);
            return py::dict(py::arg("t") = py::int_(py::str(dl.t.str())), py::arg("h") = py::int_(py::str(dl.h.str())),
                            py::arg("alpha") = dl.alpha);
        });

    py::class_<DensityFn>(m, "Density")
        .def_static("from_json", [](const std::string& s) { return DensityFn::from_json(nlohmann::json::parse(s)); })
        .def_static("constant", &DensityFn::constant)
        .def_static("affine", &DensityFn::affine)
        .def_static("checkerboard", &DensityFn::checkerboard, py::arg("depth"), py::arg("lo") = kDensityLo,
                    py::arg("hi") = kDensityHi)
        .def("__call__", [](const DensityFn& f, const std::vector<double>& x) { return f.eval(x); })
        .def("integrate", [](const DensityFn& f, const std::vector<std::string>& lo, const std::vector<std::string>& hi) {
            return f.integrate_box(Box{dyadics(lo), dyadics(hi)});
        })
        .def("hash", &DensityFn::hash);

    py::class_<PaletteEngine, std::shared_ptr<PaletteEngine>>(m, "Palette")
        .def(py::init([](LevelSchedule s, DensityFn rho, long long cap, int threads) {
                 PaletteOptions o;
                 o.materialize_cap = cap;
                 o.threads = threads;
                 return std::make_shared<PaletteEngine>(std::move(s), std::move(rho), o);
             }),
             py::arg("schedule"), py::arg("density"), py::arg("cap") = 1LL << 26, py::arg("threads") = 1)
        .def("colours", &PaletteEngine::colours)
        .def("colour", [](PaletteEngine& e, int n, long long j, const std::vector<long long>& x) {
            return e.eval_colour({n, j}, point(x));
        })
        .def("shade", [](PaletteEngine& e, int n, long long j) { return fraction(e.shade({n, j})); })
        .def("materialize", [](PaletteEngine& e, int n, long long j) { return to_array(e.materialize({n, j})); })
        .def("check_goodness", [](PaletteEngine& e, int n) {
            auto r = e.check_goodness(n);
            return py::dict(py::arg("pass") = r.pass(), py::arg("a") = r.condition_a, py::arg("b") = r.condition_b,
                            py::arg("tiles") = r.tiles_checked, py::arg("failures") = r.failures);
        })
        .def("encoding", [](PaletteEngine& e, int n, bool exhaustive) {
            EncodingOptions o;
            o.exhaustive = exhaustive;
            auto r = encoding_report(e, n, o);
            return json_obj(r.trailer());
        }, py::arg("n"), py::arg("exhaustive") = true);

    py::class_<PsiField, std::shared_ptr<PsiField>>(m, "Field")
        .def(py::init<std::shared_ptr<PaletteEngine>>())
        .def("psi", [](const PsiField& f, const std::vector<long long>& x) { return f.psi(point(x)); })
        .def("cover_level", [](const PsiField& f, const std::vector<long long>& x) {
            return f.minimal_cover_level(point(x));
        })
        .def("shift", [](const PsiField& f, int n) { return coords(f.shift(n)); })
        .def("window", [](const PsiField& f, const std::vector<long long>& base, long long side) {
            return to_array(f.psi_window(CubicSet{point(base), side}));
        })
        .def("points", [](const PsiField& f, const std::vector<std::string>& lo, const std::vector<std::string>& hi) {
            auto pw = points_in_window(f, Box{dyadics(lo), dyadics(hi)});
            py::list out;
            for (const auto& p : pw.points) {
                py::list q;
                for (const auto& c : p) q.append(c.to_double());
                out.append(py::tuple(q));
            }
            return out;
        })
        .def("points_csv", [](const PsiField& f, const std::vector<std::string>& lo, const std::vector<std::string>& hi) {
            return points_csv(points_in_window(f, Box{dyadics(lo), dyadics(hi)}));
        })
        .def("delone_constants", [](const PsiField& f, const std::vector<std::string>& lo,
                                    const std::vector<std::string>& hi, const std::string& margin) {
            auto dc = delone_constants(points_in_window(f, Box{dyadics(lo), dyadics(hi)}), Dyadic::parse(margin));
            auto frac = [](const Dyadic& v) {
                return fraction(Rational(to_big(v.numerator()), big_pow2(v.exponent())));
            };
            return py::dict(py::arg("separation_sq") = frac(dc.separation_sq),
                            py::arg("covering_radius_sq") = frac(dc.covering_radius_sq),
                            py::arg("points") = dc.interior_points);
        }, py::arg("lo"), py::arg("hi"), py::arg("margin") = "2")
        .def("repetitivity", [](const PsiField& f, int n, const std::string& r, int pairs, std::uint64_t seed, int threads) {
            SampleSpec s{pairs, seed, threads};
            return json_obj(verify_mapping_repetitivity(f, n, parse_rational(r), s).trailer());
        }, py::arg("n"), py::arg("r"), py::arg("pairs") = 64, py::arg("seed") = 1, py::arg("threads") = 1)
        .def("net_repetitivity", [](const PsiField& f, const std::string& r, int pairs, std::uint64_t seed, int threads) {
            SampleSpec s{pairs, seed, threads};
            return json_obj(verify_net_repetitivity(f, std::nullopt, parse_rational(r), s).trailer());
        }, py::arg("r"), py::arg("pairs") = 32, py::arg("seed") = 1, py::arg("threads") = 1)
        .def("nesting", [](const PsiField& f) { return json_obj(check_nesting(f).trailer()); });
}
