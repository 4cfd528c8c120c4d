#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ncball/casestudy.hpp"
#include "ncball/io.hpp"
#include "oracles.hpp"

using namespace ncball;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ncball_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string schema_pointer(const std::string& text) {
  try {
    io::tuple_from_json(io::Json::parse(text));
  } catch (const io::SchemaError& e) {
    return e.pointer();
  }
  FAIL("expected a schema error for " << text);
  return {};
}

}  // namespace

TEST_CASE("minimal tuple file") {
  const MatTuple X = io::load_tuple(write("min.json", R"({"d":1,"n":1,"mats":[[[[0.5,0.0]]]]})"));
  CHECK(X.d() == 1);
  CHECK(X.n() == 1);
  CHECK(X[0](0, 0) == Complex(0.5, 0.0));
}

TEST_CASE("shipped famous tuple") {
  const MatTuple A = io::load_tuple(NCBALL_DATA_DIR "/famousA.json");
  const FamousExample ex = build_famous();
  CHECK(A[0] == ex.descriptor.A[0]);
  CHECK(A[1] == ex.descriptor.A[1]);
  const DescriptorRealization R = io::load_realization(NCBALL_DATA_DIR "/famous.json");
  CHECK(R.b == ex.descriptor.b);
  CHECK(R.c == ex.descriptor.c);
  const MatTuple p = io::load_point(NCBALL_DATA_DIR "/p11.json");
  CHECK(p[1](0, 0) == Complex(1.0));
}

TEST_CASE("round trips are bit exact") {
  oracle::Gen g(101);
  std::vector<CMatrix> mats;
  for (int j = 0; j < 3; ++j) {
    CMatrix m = g.mat(4, 4);
    m(0, 0) = Complex(1e-300 * g.normal(), 1e300 * g.normal());
    m(1, 2) = Complex(-0.0, 5e-324);
    mats.push_back(m);
  }
  const MatTuple X(mats);
  const std::string path = scratch("rt.json").string();
  io::save_tuple(X, path);
  const MatTuple Y = io::load_tuple(path);
  for (int j = 0; j < 3; ++j) CHECK(X[j] == Y[j]);

  const DescriptorRealization R = build_famous().descriptor;
  io::save_realization(R, scratch("r.json").string());
  const DescriptorRealization S = io::load_realization(scratch("r.json").string());
  CHECK(S.A[0] == R.A[0]);
  CHECK(S.b == R.b);

  const OpSpaceSpec P = OpSpaceSpec::pencil(MatTuple({g.mat(2, 2), g.mat(2, 2), g.mat(2, 2)}));
  const OpSpaceSpec Q = io::space_from_json(io::to_json(P));
  CHECK(Q.kind() == SpaceKind::ConcretePencil);
  CHECK(Q.Q()[2] == P.Q()[2]);
  CHECK(io::space_from_json(io::to_json(OpSpaceSpec::max_l1(4))).d() == 4);
}

TEST_CASE("schema errors name the failing location") {
  CHECK(schema_pointer(R"({"d":2,"n":3})") == "/mats");
  CHECK(schema_pointer(R"({"n":1,"mats":[]})") == "/d");
  CHECK(schema_pointer(R"({"d":1,"n":2,"mats":[[[[1,0],[0,0]],[[0,0]]]]})") == "/mats/0/1");
  CHECK(schema_pointer(R"({"d":1,"n":1,"mats":[[[[1,0,3]]]]})") == "/mats/0/0/0");
  CHECK(schema_pointer(R"({"d":1,"n":1,"mats":[[[["x",0]]]]})") == "/mats/0/0/0/0");
  CHECK(schema_pointer(R"({"d":2,"n":1,"mats":[[[[1,0]]]]})") == "/mats");
  CHECK(schema_pointer(R"({"d":1,"n":2,"mats":[[[[1,0]]]]})") == "/mats/0");
  CHECK(schema_pointer(R"({"d":0,"n":1,"mats":[[[[1,0]]]]})") == "/d");
  CHECK(schema_pointer(R"([1,2])") == "");

  try {
    io::load_tuple(write("trunc.json", R"({"d":1,"n":1,"mats":[[[[0.5,)"));
    FAIL("truncated JSON");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("not valid JSON") != std::string::npos);
  }
  try {
    io::load_realization(write("r_missing.json", R"({"state_dim":1,"A":[[[[0,0]]]],"b":[[1,0]]})"));
    FAIL("missing c");
  } catch (const io::SchemaError& e) {
    CHECK(e.pointer() == "/c");
    CHECK(std::string(e.what()).find("missing field 'c'") != std::string::npos);
  }
  try {
    io::space_from_json(io::Json::parse(R"({"kind":"hexagon","d":2})"));
    FAIL("bad kind");
  } catch (const io::SchemaError& e) {
    CHECK(e.pointer() == "/kind");
  }
  CHECK_THROWS_AS(io::load_tuple(scratch("does_not_exist.json").string()), Error);
}

TEST_CASE("reports") {
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  RadiusEstimate e;
  e.lower = 0.5;
  e.upper = std::numeric_limits<double>::infinity();
  e.method = "m";
  const io::Json j = io::to_json(e);
  CHECK(j["upper"] == "inf");
  CHECK(j["truncation_order"].is_null());
  CHECK(io::dump(j).back() == '\n');
}
