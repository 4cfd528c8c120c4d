#include "ncball/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ncball::io {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string child(const std::string& at, const std::string& key) { return at + "/" + key; }
std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

const Json& field(const Json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(at, key), "missing field '" + key + "'");
  return *it;
}

double real_from_json(const Json& j, const std::string& at) {
  if (!j.is_number()) throw SchemaError(at, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(at, "number is not finite");
  return v;
}

int int_from_json(const Json& j, const std::string& at, int lo) {
  if (!j.is_number_integer()) throw SchemaError(at, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo || v > (1 << 20)) throw SchemaError(at, "integer out of range");
  return static_cast<int>(v);
}

std::vector<CMatrix> matrices_from_json(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw SchemaError(at, "expected a non-empty array of matrices");
  std::vector<CMatrix> mats;
  for (std::size_t k = 0; k < j.size(); ++k) mats.push_back(matrix_from_json(j[k], child(at, k)));
  for (std::size_t k = 1; k < mats.size(); ++k) {
    if (mats[k].rows() != mats[0].rows() || mats[k].cols() != mats[0].cols())
      throw SchemaError(child(at, k), "matrix size differs from the first matrix");
  }
  return mats;
}

Json matrices_to_json(const MatTuple& X) {
  Json mats = Json::array();
  for (int j = 0; j < X.d(); ++j) mats.push_back(to_json(X[j]));
  return mats;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
  require_finite(m, "matrix");
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const MatTuple& X) {
  Json j;
  j["d"] = X.d();
  j["n"] = X.n();
  j["mats"] = matrices_to_json(X);
  return j;
}

Json to_json(const DescriptorRealization& R) {
  Json j;
  j["state_dim"] = R.state_dim();
  j["A"] = matrices_to_json(R.A);
  j["b"] = vector_to_json(R.b);
  j["c"] = vector_to_json(R.c);
  return j;
}

Json to_json(const OpSpaceSpec& spec) {
  Json j;
  j["kind"] = space_kind_name(spec.kind());
  j["d"] = spec.d();
  if (spec.kind() == SpaceKind::ConcretePencil) j["Q"] = to_json(spec.Q());
  return j;
}

Json to_json(const NormEstimate& e) {
  Json j;
  j["lower"] = number(e.lower);
  j["upper"] = number(e.upper);
  j["exact"] = e.exact;
  j["method"] = e.method;
  if (e.seed) j["seed"] = *e.seed;
  return j;
}

Json to_json(const SimilarityWitness& w, bool with_trace) {
  Json j;
  j["achieved_norm"] = number(w.achieved_norm);
  j["condition_number"] = number(w.condition_number);
  j["iterations"] = w.iterations;
  j["restart"] = w.restart;
  j["seed"] = w.seed;
  j["S"] = to_json(w.S);
  if (with_trace) {
    Json t = Json::array();
    for (double v : w.trace) t.push_back(number(v));
    j["trace"] = std::move(t);
  }
  return j;
}

Json to_json(const RadiusEstimate& e) {
  Json j;
  j["lower"] = number(e.lower);
  j["upper"] = number(e.upper);
  j["width"] = number(e.width());
  j["method"] = e.method;
  j["lower_method"] = e.lower_method;
  j["upper_method"] = e.upper_method;
  j["truncation_order"] = e.truncation_order ? Json(*e.truncation_order) : Json(nullptr);
  if (!e.components.empty()) {
    Json comps = Json::array();
    for (const auto& c : e.components)
      comps.push_back({{"size", c.size}, {"lower", number(c.lower)}, {"upper", number(c.upper)}});
    j["components"] = std::move(comps);
  }
  if (!e.diagnostics.empty()) {
    Json diag = Json::object();
    for (const auto& [k, v] : e.diagnostics) diag[k] = number(v);
    j["diagnostics"] = std::move(diag);
  }
  if (e.witness) j["witness"] = to_json(*e.witness);
  return j;
}

Json to_json(const Decision& d) {
  Json j;
  j["verdict"] = verdict_name(d.verdict);
  j["reason"] = d.reason;
  j["estimate"] = to_json(d.estimate);
  return j;
}

Complex complex_from_json(const Json& j, const std::string& at) {
  if (j.is_number()) return {real_from_json(j, at), 0.0};
  if (!j.is_array() || j.size() != 2) throw SchemaError(at, "expected a complex number [re, im]");
  return {real_from_json(j[0], child(at, std::size_t{0})), real_from_json(j[1], child(at, std::size_t{1}))};
}

CMatrix matrix_from_json(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw SchemaError(at, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw SchemaError(child(at, std::size_t{0}), "expected a non-empty row");
  const std::size_t cols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rat = child(at, r);
    if (!j[r].is_array()) throw SchemaError(rat, "expected a row array");
    if (j[r].size() != cols) throw SchemaError(rat, "row has " + std::to_string(j[r].size()) + " entries, expected " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c], child(rat, c));
  }
  return m;
}

CVector vector_from_json(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw SchemaError(at, "expected a non-empty array of complex numbers");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], child(at, i));
  return v;
}

MatTuple tuple_from_json(const Json& j, const std::string& at) {
  const int d = int_from_json(field(j, "d", at), child(at, "d"), 1);
  const int n = int_from_json(field(j, "n", at), child(at, "n"), 1);
  const std::string mat_at = child(at, "mats");
  std::vector<CMatrix> mats = matrices_from_json(field(j, "mats", at), mat_at);
  if (static_cast<int>(mats.size()) != d)
    throw SchemaError(mat_at, "holds " + std::to_string(mats.size()) + " matrices but d=" + std::to_string(d));
  if (mats[0].rows() != n || mats[0].cols() != n)
    throw SchemaError(child(mat_at, std::size_t{0}), "matrix is not " + std::to_string(n) + "x" + std::to_string(n));
  return MatTuple(std::move(mats));
}

DescriptorRealization realization_from_json(const Json& j, const std::string& at) {
  const int m = int_from_json(field(j, "state_dim", at), child(at, "state_dim"), 1);
  DescriptorRealization R;
  const std::string a_at = child(at, "A");
  std::vector<CMatrix> mats = matrices_from_json(field(j, "A", at), a_at);
  if (mats[0].rows() != m || mats[0].cols() != m)
    throw SchemaError(child(a_at, std::size_t{0}), "matrix is not state_dim x state_dim");
  R.A = MatTuple(std::move(mats));
  R.b = vector_from_json(field(j, "b", at), child(at, "b"));
  R.c = vector_from_json(field(j, "c", at), child(at, "c"));
  if (R.b.size() != m) throw SchemaError(child(at, "b"), "length differs from state_dim");
  if (R.c.size() != m) throw SchemaError(child(at, "c"), "length differs from state_dim");
  return R;
}

OpSpaceSpec space_from_json(const Json& j, const std::string& at) {
  const Json& kind_j = field(j, "kind", at);
  if (!kind_j.is_string()) throw SchemaError(child(at, "kind"), "expected a string");
  SpaceKind kind;
  try {
    kind = parse_space_kind(kind_j.get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(child(at, "kind"), e.what());
  }
  if (kind == SpaceKind::ConcretePencil) {
    const Json& q = field(j, "Q", at);
    return OpSpaceSpec::pencil(tuple_from_json(q, child(at, "Q")));
  }
  const int d = int_from_json(field(j, "d", at), child(at, "d"), 1);
  switch (kind) {
    case SpaceKind::Row: return OpSpaceSpec::row(d);
    case SpaceKind::Column: return OpSpaceSpec::column(d);
    case SpaceKind::MinLinf: return OpSpaceSpec::min_linf(d);
    default: return OpSpaceSpec::max_l1(d);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", "'" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Resource, "write to '" + path + "' failed");
}

MatTuple load_tuple(const std::string& path) { return tuple_from_json(read_json_file(path)); }

DescriptorRealization load_realization(const std::string& path) {
  return realization_from_json(read_json_file(path));
}

MatTuple load_point(const std::string& path) {
  const Json j = read_json_file(path);
  // A bare array of complex scalars is accepted as a 1x1 point.
  if (j.is_array()) {
    std::vector<Complex> z;
    for (std::size_t i = 0; i < j.size(); ++i) z.push_back(complex_from_json(j[i], child("", i)));
    if (z.empty()) throw SchemaError("", "empty point");
    return MatTuple::scalars(z);
  }
  return tuple_from_json(j);
}

void save_tuple(const MatTuple& X, const std::string& path) { write_text_file(path, dump(to_json(X))); }

void save_realization(const DescriptorRealization& R, const std::string& path) {
  write_text_file(path, dump(to_json(R)));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void save_report(const Json& report, const std::string& path) { write_text_file(path, dump(report)); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ncball::io
