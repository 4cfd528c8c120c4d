#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncball/casestudy.hpp"
#include "ncball/decomposition.hpp"
#include "ncball/io.hpp"
#include "ncball/ncexpr.hpp"
#include "ncball/opspace.hpp"
#include "ncball/realization.hpp"
#include "ncball/similarity.hpp"
#include "ncball/specrad.hpp"

namespace py = pybind11;
using namespace ncball;

namespace {

MatTuple to_tuple(const std::vector<CMatrix>& mats) { return MatTuple(mats); }
std::vector<CMatrix> from_tuple(const MatTuple& X) { return X.mats(); }

RadiusOptions radius_options(int n, std::uint64_t seed, int restarts, bool witness) {
  RadiusOptions r;
  r.n = n;
  r.sampling.seed = seed;
  r.optim.seed = seed;
  r.optim.restarts = restarts;
  r.witness = witness;
  return r;
}

// Reports go through the JSON schema shared with the CLI.
py::object as_python(const io::Json& j) {
  // Never freed: destroying Python objects after interpreter shutdown crashes.
  static auto* loads = new py::object(py::module_::import("json").attr("loads"));
  return (*loads)(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint spectral radii, similarity to operator balls and nc rational functions";

  static auto* error_type = new py::object(py::exception<Error>(m, "NcballError", PyExc_ValueError));
  static auto* outside_type =
      new py::object(py::exception<OutsideDomainError>(m, "OutsideDomainError", error_type->ptr()));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const OutsideDomainError& e) {
      py::object inst = (*outside_type)(e.what());
      inst.attr("code") = error_code_name(e.code());
      inst.attr("sigma_min") = e.sigma_min();
      PyErr_SetObject(outside_type->ptr(), inst.ptr());
    } catch (const Error& e) {
      py::object inst = (*error_type)(e.what());
      inst.attr("code") = error_code_name(e.code());
      PyErr_SetObject(error_type->ptr(), inst.ptr());
    }
  });

  py::class_<OpSpaceSpec>(m, "Space")
      .def_static("row", &OpSpaceSpec::row, py::arg("d"))
      .def_static("column", &OpSpaceSpec::column, py::arg("d"))
      .def_static("min_linf", &OpSpaceSpec::min_linf, py::arg("d"))
      .def_static("max_l1", &OpSpaceSpec::max_l1, py::arg("d"))
      .def_static("pencil", [](const std::vector<CMatrix>& Q) { return OpSpaceSpec::pencil(to_tuple(Q)); }, py::arg("Q"))
      .def_property_readonly("kind", [](const OpSpaceSpec& s) { return space_kind_name(s.kind()); })
      .def_property_readonly("d", &OpSpaceSpec::d)
      .def("dual", &dual_spec)
      .def("__repr__", &OpSpaceSpec::describe);

  m.def("space_norm", [](const OpSpaceSpec& s, const std::vector<CMatrix>& X, std::uint64_t seed) {
    NormOptions o;
    o.seed = seed;
    return as_python(io::to_json(space_norm(s, to_tuple(X), o)));
  }, py::arg("space"), py::arg("X"), py::arg("seed") = 0);
  m.def("ball_contains", [](const OpSpaceSpec& s, const std::vector<CMatrix>& X, double r) {
    return std::string(containment_name(ball_contains(s, to_tuple(X), r)));
  }, py::arg("space"), py::arg("X"), py::arg("r") = 1.0);

  m.def("rho_row_exact", [](const std::vector<CMatrix>& X) { return as_python(io::to_json(rho_row_exact(to_tuple(X)))); });
  m.def("rho_column_exact", [](const std::vector<CMatrix>& X) { return as_python(io::to_json(rho_column_exact(to_tuple(X)))); });
  m.def("rho_rs_bounds", [](const std::vector<CMatrix>& X, int n_max) {
    return as_python(io::to_json(rho_rs_bounds(to_tuple(X), n_max)));
  }, py::arg("X"), py::arg("n_max"));
  m.def("rho_estimate", [](const OpSpaceSpec& s, const std::vector<CMatrix>& X, int n, std::uint64_t seed, int restarts, bool witness) {
    return as_python(io::to_json(rho_estimate(s, to_tuple(X), radius_options(n, seed, restarts, witness))));
  }, py::arg("space"), py::arg("X"), py::arg("n") = 6, py::arg("seed") = 0, py::arg("restarts") = 8, py::arg("witness") = true);
  m.def("decide_similarity_to_ball", [](const OpSpaceSpec& s, const std::vector<CMatrix>& X, std::uint64_t seed, int restarts) {
    return as_python(io::to_json(decide_similarity_to_ball(s, to_tuple(X), radius_options(6, seed, restarts, true))));
  }, py::arg("space"), py::arg("X"), py::arg("seed") = 0, py::arg("restarts") = 8);
  m.def("minimize_conjugated_norm", [](const OpSpaceSpec& s, const std::vector<CMatrix>& X, std::uint64_t seed, int restarts) {
    OptimConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    const SimilarityWitness w = minimize_conjugated_norm(s, to_tuple(X), cfg);
    py::dict out = as_python(io::to_json(w));
    out["S"] = w.S;
    return out;
  }, py::arg("space"), py::arg("X"), py::arg("seed") = 0, py::arg("restarts") = 8);

  m.def("holder_jordan", [](const std::vector<CMatrix>& X, std::uint64_t seed) {
    const DecompositionResult r = holder_jordan(to_tuple(X), seed);
    py::dict out;
    out["basis"] = r.basis;
    out["block_sizes"] = r.block_sizes;
    std::vector<std::vector<CMatrix>> comps;
    for (const auto& c : r.components) comps.push_back(from_tuple(c));
    out["components"] = comps;
    out["triangular"] = from_tuple(r.triangular);
    return out;
  }, py::arg("X"), py::arg("seed") = 0);
  m.def("is_irreducible", [](const std::vector<CMatrix>& X) { return is_irreducible(to_tuple(X)); });

  m.def("parse_expr", [](const std::string& text, int d) {
    const ExprPtr e = parse_expr(text, d);
    return py::make_tuple(to_string(e), to_tree_string(e));
  }, py::arg("text"), py::arg("d"));
  m.def("eval_expr", [](const std::string& text, const std::vector<CMatrix>& X) {
    const MatTuple T = to_tuple(X);
    return eval_expr(parse_expr(text, T.d()), T);
  }, py::arg("text"), py::arg("X"));

  py::class_<DescriptorRealization>(m, "Realization")
      .def(py::init([](const std::vector<CMatrix>& A, const CVector& b, const CVector& c) {
        DescriptorRealization R{to_tuple(A), b, c};
        R.validate();
        return R;
      }), py::arg("A"), py::arg("b"), py::arg("c"))
      .def_property_readonly("A", [](const DescriptorRealization& R) { return from_tuple(R.A); })
      .def_readonly("b", &DescriptorRealization::b)
      .def_readonly("c", &DescriptorRealization::c)
      .def_property_readonly("state_dim", &DescriptorRealization::state_dim)
      .def_property_readonly("d", &DescriptorRealization::d)
      .def("to_json", [](const DescriptorRealization& R) { return io::to_json(R).dump(); })
      .def_static("from_json", [](const std::string& text) { return io::realization_from_json(io::Json::parse(text)); });

  m.def("realize", [](const std::string& text, int d, bool minimize) {
    DescriptorRealization R = realize(parse_expr(text, d), d);
    return minimize ? minimize_realization(R) : R;
  }, py::arg("text"), py::arg("d"), py::arg("minimize") = false);
  m.def("minimize_realization", &minimize_realization);
  m.def("eval_realization", [](const DescriptorRealization& R, const std::vector<CMatrix>& X) {
    return eval_descriptor(R, to_tuple(X));
  }, py::arg("R"), py::arg("X"));
  m.def("domain_contains", [](const DescriptorRealization& R, const std::vector<CMatrix>& X) {
    return domain_contains(R, to_tuple(X));
  }, py::arg("R"), py::arg("X"));
  m.def("domain_sigma_min", [](const DescriptorRealization& R, const std::vector<CMatrix>& X) {
    return domain_sigma_min(R, to_tuple(X));
  }, py::arg("R"), py::arg("X"));
  m.def("domain_ball_certificate", [](const DescriptorRealization& R, const OpSpaceSpec& s, std::uint64_t seed) {
    const DomainBallCertificate c = domain_ball_certificate(R, s, radius_options(6, seed, 8, true));
    py::dict out;
    out["inclusion_radius"] = c.inclusion_radius;
    out["exclusion_radius"] = c.exclusion_radius;
    out["unbounded"] = c.unbounded;
    out["dual_space"] = c.dual_space;
    out["dual_radius"] = as_python(io::to_json(c.dual_radius));
    return out;
  }, py::arg("R"), py::arg("space"), py::arg("seed") = 0);

  m.def("famous_realization", [] { return build_famous().descriptor; });
  m.def("famous_scalar_value", &famous_scalar_value);
  m.def("word_power_check", &word_power_check);
  m.def("word_sum_norm", &word_sum_norm);
  m.def("lemma_T_check", [](int n, int trials, int dim, std::uint64_t seed) {
    const LemmaCheckResult r = lemma_T_check(n, trials, {dim, seed});
    py::dict out;
    out["max_violation"] = r.max_violation;
    out["max_norm"] = r.max_norm;
    out["trials"] = r.trials;
    out["rejected"] = r.rejected;
    return out;
  }, py::arg("n"), py::arg("trials"), py::arg("dim") = 3, py::arg("seed") = 0);
}
