#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include "coxdl/acceptance.hpp"
#include "coxdl/langlands.hpp"
#include "coxdl/lemmas.hpp"

namespace py = pybind11;
using namespace coxdl;

namespace {

py::dict lemma_dict(const LemmaVerdict& v) {
    py::dict d;
    d["id"] = v.id;
    d["params"] = v.params;
    d["pass"] = v.pass;
    d["skipped"] = v.skipped;
    d["reason"] = v.reason;
    d["witness"] = v.witness;
    d["detail"] = v.detail;
    d["seed"] = v.seed;
    return d;
}

std::uint64_t points(unsigned q, unsigned n, unsigned kappa, unsigned h, unsigned ext) {
    GroupSpec s = GroupSpec::make(q, n, kappa, h);
    PointModel M(s);
    auto tower = build_tower(s.p, s.f, {ext});
    return count_points(M, *tower, ext);
}

// Owns a pipeline; characters are passed as "g0:e0,g1:e1" strings.
class PyPipeline {
public:
    PyPipeline(unsigned q, unsigned n, unsigned kappa, unsigned h, unsigned threads)
        : P_(GroupSpec::make(q, n, kappa, h), PipelineOptions{threads}) {}

    std::size_t group_order() const { return P_.group().size(); }
    std::uint64_t torus_order() const { return P_.torus().order(); }
    std::vector<std::size_t> class_sizes() const { return P_.group().classes().size; }
    std::size_t identity_class() const { return P_.group().classes().class_of[P_.group().identity_index()]; }

    std::vector<std::vector<std::uint64_t>> s_table() {
        const auto& t = P_.table();
        std::vector<std::vector<std::uint64_t>> r(t.classes);
        for (std::size_t k = 0; k < t.classes; ++k)
            r[k].assign(t.counts.begin() + k * t.tcount, t.counts.begin() + (k + 1) * t.tcount);
        return r;
    }

    std::vector<std::string> characters(bool gp_only) const {
        std::vector<std::string> r;
        for (auto& th : all_characters(P_.torus()))
            if (!gp_only || is_general_position(th, false)) r.push_back(format_theta(th));
        return r;
    }

    py::dict extract(const std::string& theta) {
        auto th = parse_theta(P_.torus(), theta);
        auto rep = P_.lambda_extract(P_.c_function(th), th);
        py::dict d;
        d["theta"] = format_theta(th);
        d["concentrated"] = rep.concentrated;
        d["cc"] = rep.cc.get_str();
        d["note"] = rep.note;
        if (rep.concentrated) {
            std::vector<std::string> vals;
            for (auto& v : rep.chi.values) vals.push_back(v.str());
            std::vector<std::complex<double>> num;
            for (auto& v : rep.chi.values) num.push_back(v.to_complex());
            d["r"] = rep.r;
            d["lambda"] = rep.lambda.get_str();
            d["values"] = vals;
            d["numeric"] = num;
            d["degree_ok"] = verify_degree(P_, rep).pass;
            d["very_regular_ok"] = verify_very_regular(P_, rep).pass;
        }
        return d;
    }

    py::dict mackey(const std::vector<std::string>& thetas) {
        std::vector<TorusChar> th;
        for (auto& s : thetas) th.push_back(parse_theta(P_.torus(), s));
        auto res = mackey_matrix(P_, th);
        std::vector<std::vector<std::string>> meas;
        for (auto& row : res.measured) {
            meas.emplace_back();
            for (auto& v : row) meas.back().push_back(v < 0 ? "" : v.get_str());
        }
        py::dict d;
        d["pass"] = res.pass;
        d["measured"] = meas;
        d["predicted"] = res.predicted;
        d["extracted"] = res.extracted;
        return d;
    }

private:
    Pipeline P_;
};

}  // namespace

PYBIND11_MODULE(_coxdl, m) {
    m.doc() = "Exact higher Deligne-Lusztig computations at small parameters";

    m.def("group_order", [](unsigned q, unsigned n, unsigned kappa, unsigned h) {
        return group_order(GroupSpec::make(q, n, kappa, h)).get_str();
    }, py::arg("q"), py::arg("n"), py::arg("kappa"), py::arg("h"));
    m.def("points", &points, py::arg("q"), py::arg("n"), py::arg("kappa"), py::arg("h"), py::arg("ext"));

    py::class_<PyPipeline>(m, "Pipeline")
        .def(py::init<unsigned, unsigned, unsigned, unsigned, unsigned>(), py::arg("q"), py::arg("n"),
             py::arg("kappa") = 0, py::arg("h") = 1, py::arg("threads") = 1)
        .def_property_readonly("group_order", &PyPipeline::group_order)
        .def_property_readonly("torus_order", &PyPipeline::torus_order)
        .def_property_readonly("class_sizes", &PyPipeline::class_sizes)
        .def_property_readonly("identity_class", &PyPipeline::identity_class)
        .def("s_table", &PyPipeline::s_table, py::call_guard<py::gil_scoped_release>())
        .def("characters", &PyPipeline::characters, py::arg("gp_only") = false)
        .def("extract", &PyPipeline::extract)
        .def("mackey", &PyPipeline::mackey);

    m.def("verify_norm_image", [](unsigned q, unsigned n, unsigned mm, unsigned h) {
        return lemma_dict(verify_norm_image(q, n, mm, h));
    });
    m.def("verify_rh_fibers", [](unsigned q, unsigned r, unsigned s, unsigned h, unsigned m_max) {
        return lemma_dict(verify_Rh_fibers(q, r, s, h, m_max));
    });
    m.def("verify_curve_reduction", [](unsigned q, unsigned a, unsigned b, unsigned c, unsigned d, unsigned m_max) {
        return lemma_dict(verify_curve_reduction(q, a, b, c, d, m_max));
    });
    m.def("verify_turnbull", [](unsigned trials, std::uint64_t seed) { return lemma_dict(verify_turnbull(trials, seed)); });
    m.def("verify_sigma_w", [](unsigned n_max) { return lemma_dict(verify_sigma_w(n_max)); });
    m.def("sigma_w_empty_predicate", &sigma_w_empty_predicate);
    m.def("staircase", &staircase);
    m.def("macdonald_volume", [](unsigned q, unsigned n, unsigned kappa) {
        return macdonald_volume(GroupSpec::make(q, n, kappa, 1)).get_str();
    });

    m.def("run_acceptance", [](bool full, std::vector<int> only) {
        AcceptOptions o;
        o.full = full;
        o.only = std::move(only);
        std::vector<py::dict> out;
        std::vector<CriterionResult> res;
        {
            py::gil_scoped_release nogil;
            res = run_acceptance(o);
        }
        for (auto& r : res) {
            py::dict d;
            d["id"] = r.id;
            d["title"] = r.title;
            d["pass"] = r.pass;
            d["lines"] = r.lines;
            out.push_back(d);
        }
        return out;
    }, py::arg("full") = false, py::arg("only") = std::vector<int>{});

    py::register_exception<capacity_error>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<unsupported_model>(m, "UnsupportedModel", PyExc_NotImplementedError);
}
