#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmech/cli.hpp"
#include "qmech/json_io.hpp"

using qmech::Json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qmech::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempInstance {
 public:
  explicit TempInstance(const std::string& body) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() / ("qmech_cli_" + std::to_string(++counter) + ".json");
    std::ofstream(path_) << body;
  }
  ~TempInstance() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("allocate") {
  TempInstance lpt(R"({"jobs": ["2", "1"], "bids": ["2", "8"]})");
  Run r = run({"allocate", "lpt-star", lpt.path()});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["workloads"] == Json::parse(R"(["3","0"])"));

  TempInstance vcg(R"({"jobs": ["2", "1"], "bids": ["1", "3"]})");
  r = run({"allocate", "vcg", vcg.path()});
  CHECK(Json::parse(r.out)["workloads"] == Json::parse(R"(["3","0"])"));

  TempInstance opt(R"({"jobs": ["2", "1"], "bids": ["1", "2"]})");
  r = run({"allocate", "opt", opt.path()});
  CHECK(Json::parse(r.out)["makespan"] == "2");

  CHECK(run({"allocate", "nope", opt.path()}).code == 2);
  TempInstance broken(R"({"jobs": [2.5], "bids": ["1"]})");
  CHECK(run({"allocate", "vcg", broken.path()}).code == 2);
  CHECK(run({"allocate", "vcg", "/nonexistent/qmech.json"}).code == 2);
  TempInstance big(R"({"jobs": ["7","6","5","5","4","3","3","2","1"], "bids": ["1","2","3"]})");
  CHECK(run({"allocate", "opt", big.path(), "--budget", "5"}).code == 3);
}

TEST_CASE("check") {
  Run r = run({"check", "ef", "vcg", "--random", "100", "--seed", "7"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["failures"] == 0);

  r = run({"check", "le", "--workloads", "1,2", "--bids", "1,2"});
  CHECK(r.code == 1);
  const Json v = Json::parse(r.out);
  CHECK(v["counterexample"]["lhs"] == "5");
  CHECK(v["counterexample"]["rhs"] == "4");

  r = run({"check", "ratio", "vcg", "--theorem1", "m=3", "c=3/2"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["ratio"] == "5/3");
  CHECK(run({"check", "ratio", "vcg", "--theorem1", "m=3", "c=3/2", "--text"}).out == "5/3\n");

  CHECK(run({"check", "truthful", "lpt-cost", "--random", "20", "--seed", "3"}).code == 1);
  CHECK(run({"check", "bogus", "vcg", "--random", "2"}).code == 2);
  CHECK(run({"check", "ef", "vcg"}).code == 2);
  CHECK(run({"check"}).code == 2);
}

TEST_CASE("ratio csv and parallel runs keep their order") {
  const Run serial = run({"check", "ratio", "lpt-star", "--random", "12", "--seed", "9", "--csv"});
  const Run parallel =
      run({"check", "ratio", "lpt-star", "--random", "12", "--seed", "9", "--csv", "--jobs-parallel", "4"});
  CHECK(serial.code == 0);
  CHECK(serial.out.rfind("rule,m,n,ratio\n", 0) == 0);
  CHECK(serial.out == parallel.out);
}

TEST_CASE("certify") {
  Run r = run({"certify", "theorem5", "--a", "8,16"});
  REQUIRE(r.code == 0);
  const Json t5 = Json::parse(r.out);
  CHECK(t5["verified"] == true);
  CHECK(r.out.find("\"26\"") != std::string::npos);
  CHECK(r.out.find("\"52\"") != std::string::npos);

  r = run({"certify", "theorem7", "--tol", "1/1000000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("3.905465") != std::string::npos);

  r = run({"certify", "polytope", "--rule", "lpt-star", "--grid", "1,2,8", "--jobs", "2,1"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out).contains("feasibility"));

  CHECK(run({"certify", "theorem5", "--a", "4"}).code == 2);
  CHECK(run({"certify", "lemma6", "--rule", "vcg", "--k", "2"}).code == 2);
  CHECK(run({"certify", "nothing"}).code == 2);
}

TEST_CASE("curve") {
  Run r = run({"curve", "lpt-star", "--others", "8", "--jobs", "2,1"});
  REQUIRE(r.code == 0);
  const Json c = Json::parse(r.out);
  CHECK(c["breakpoints"] == Json::parse(R"(["2","8","16"])"));
  CHECK(c["integral"] == "26");

  r = run({"curve", "at-expected", "--others", "1", "--jobs", "2,1"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["pieces"].size() == 6);
}

TEST_CASE("seeded runs are byte-identical") {
  const std::vector<std::string> args{"check", "monotone", "lpt-star", "--random", "30", "--seed", "11"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> sample{"check", "ratio", "at-sample", "--random", "10", "--seed", "5", "--csv"};
  CHECK(run(sample).out == run(sample).out);
  const std::vector<std::string> prop{"certify", "prop12", "--samples", "20", "--seed", "2"};
  CHECK(run(prop).out == run(prop).out);
}
