#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncball/cli.hpp"
#include "ncball/io.hpp"

using namespace ncball;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  io::Json report() const { return io::Json::parse(out); }
};

Run ncball_run(std::vector<std::string> args) {
  args.insert(args.begin(), "ncball");
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const std::string data = NCBALL_DATA_DIR;

std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ncball_cli_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("radius of the famous tuple in the polydisc space") {
  const Run r = ncball_run({"radius", "--space", "minlinf", "--tuple", data + "/famousA.json"});
  REQUIRE(r.code == cli::kExitOk);
  const io::Json j = r.report();
  CHECK(j["command"] == "radius");
  CHECK(j["seed"] == 0);
  CHECK(j["inputs_digest"].get<std::string>().size() == 16);
  const io::Json& est = j["results"]["radius"];
  CHECK(est["lower"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est["upper"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(est.contains("method"));
  CHECK(est.contains("truncation_order"));
}

TEST_CASE("domain check at the singular point") {
  const Run r = ncball_run({"rat", "domain", "--real", data + "/famous.json", "--point", data + "/p11.json"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.report()["results"]["status"] == "outside domain");
  const Run t = ncball_run({"rat", "domain", "--real", data + "/famous.json", "--point", data + "/p11.json",
                            "--format", "text"});
  CHECK(t.out.find("outside domain") != std::string::npos);
}

TEST_CASE("decisions and exit codes") {
  const Run j = ncball_run({"decide", "--space", "row", "--tuple", data + "/jordan.json"});
  CHECK(j.code == cli::kExitUndecided);
  CHECK(j.report()["results"]["decision"]["verdict"] == "boundary");

  const std::string witness = scratch("w.json");
  fs::remove(witness);
  const Run y = ncball_run({"decide", "--space", "minlinf", "--tuple", data + "/famousA.json", "--witness", witness});
  CHECK(y.code == cli::kExitOk);
  CHECK(y.report()["results"]["decision"]["verdict"] == "yes");
  REQUIRE(fs::exists(witness));
  const io::Json w = io::read_json_file(witness);
  CHECK(w["achieved_norm"].get<double>() < 1.0);
  CHECK(w.contains("conjugated"));
}

TEST_CASE("reports are deterministic apart from timings") {
  const std::vector<std::string> args = {"radius", "--space", "maxl1", "--tuple", data + "/famousA.json", "--seed", "3"};
  io::Json a = ncball_run(args).report(), b = ncball_run(args).report();
  CHECK(a["seed"] == 3);
  a.erase("timings");
  b.erase("timings");
  CHECK(a.dump() == b.dump());
  io::Json c = ncball_run({"radius", "--space", "maxl1", "--tuple", data + "/famousA.json", "--seed", "4"}).report();
  CHECK(c["inputs_digest"] != a["inputs_digest"]);
}

TEST_CASE("report to a file") {
  const std::string out = scratch("norm.json");
  const Run r = ncball_run({"norm", "--space", "row", "--tuple", data + "/famousA.json", "--out", out});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  const io::Json j = io::read_json_file(out);
  CHECK(j["results"]["norm"]["exact"] == true);
}

TEST_CASE("rational function pipeline") {
  const std::string formula = "(2*x1*x2 - x1 - x2) * inv(2 - x1 - x2)";
  const Run p = ncball_run({"rat", "parse", "--expr", formula});
  CHECK(p.code == 0);
  CHECK(p.report()["results"]["max_variable"] == 2);

  const std::string saved = scratch("real.json");
  const Run r = ncball_run({"rat", "realize", "--expr", formula, "--d", "2", "--save", saved});
  CHECK(r.code == 0);
  CHECK(r.report()["results"]["realization"]["state_dim"].get<int>() > 3);
  const Run m = ncball_run({"rat", "minimize", "--real", saved});
  CHECK(m.report()["results"]["state_dim"] == 3);

  const Run e = ncball_run({"rat", "eval", "--real", saved, "--point", data + "/p_inside.json"});
  CHECK(e.report()["results"]["inside_domain"] == true);
  const Run e2 = ncball_run({"rat", "eval", "--expr", formula, "--d", "2", "--point", data + "/p11.json"});
  CHECK(e2.code == 0);
  CHECK(e2.report()["results"]["inside_domain"] == false);

  const Run b = ncball_run({"rat", "ball", "--real", data + "/famous.json", "--space", "maxl1"});
  CHECK(b.report()["results"]["exclusion_radius"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("similarity and demo") {
  const Run s = ncball_run({"similarity", "--space", "row", "--tuple", data + "/jordan.json", "--restarts", "2"});
  CHECK(s.code == 0);
  CHECK(s.report()["results"]["witness"]["achieved_norm"].get<double>() >= 1.0);
  const Run d = ncball_run({"demo", "famous", "--n", "8"});
  CHECK(d.code == 0);
  CHECK(d.report()["results"]["all_pass"] == true);
}

TEST_CASE("errors exit with 1 and a message") {
  const Run missing = ncball_run({"norm", "--tuple", scratch("nope.json")});
  CHECK(missing.code == cli::kExitError);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  std::ofstream(scratch("trunc.json")) << R"({"d":2,"n":3})";
  const Run schema = ncball_run({"norm", "--tuple", scratch("trunc.json")});
  CHECK(schema.code == cli::kExitError);
  CHECK(schema.err.find("mats") != std::string::npos);

  const Run dims = ncball_run({"radius", "--space", "pencil:" + data + "/jordan.json", "--tuple", data + "/famousA.json"});
  CHECK(dims.code == cli::kExitError);
  CHECK(dims.err.find("dimension") != std::string::npos);

  const Run space = ncball_run({"norm", "--space", "hexagon", "--tuple", data + "/famousA.json"});
  CHECK(space.code == cli::kExitError);
  const Run syntax = ncball_run({"rat", "parse", "--expr", "x1 + * x2"});
  CHECK(syntax.code == cli::kExitError);
  CHECK(syntax.err.find("offset 5") != std::string::npos);
  const Run guard = ncball_run({"radius", "--tuple", data + "/famousA.json", "--nmax", "40"});
  CHECK(guard.code == cli::kExitError);
  CHECK(ncball_run({}).code == cli::kExitError);
  CHECK(ncball_run({"--help"}).code == cli::kExitOk);
}
