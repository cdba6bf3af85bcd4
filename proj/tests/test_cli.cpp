#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "sheafcoh/cli.hpp"
#include "sheafcoh/errors.hpp"
#include "support.hpp"

namespace sheafcoh {
namespace {

using cli::Json;
using testing::Factors;
using testing::factors;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "sheafcoh");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("sheafcoh-cli-" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void expect_same_instance(const cli::Instance& a, const cli::Instance& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_TRUE(a.poset == b.poset);
  ASSERT_EQ(a.sheaf.poset().size(), b.sheaf.poset().size());
  for (std::size_t e = 0; e < a.poset.size(); ++e) {
    EXPECT_EQ(a.sheaf.stalk(e).relations(), b.sheaf.stalk(e).relations());
    for (std::size_t f = 0; f < a.poset.size(); ++f)
      if (a.poset.leq(e, f)) {
        EXPECT_EQ(a.sheaf.restriction(e, f).matrix, b.sheaf.restriction(e, f).matrix);
      }
  }
  EXPECT_EQ(a.coefficients.has_value(), b.coefficients.has_value());
  if (a.coefficients && b.coefficients) {
    EXPECT_EQ(a.coefficients->relations(), b.coefficients->relations());
  }
  EXPECT_EQ(a.perfect_complex.has_value(), b.perfect_complex.has_value());
  if (a.perfect_complex && b.perfect_complex) {
    EXPECT_EQ(a.perfect_complex->lo, b.perfect_complex->lo);
    EXPECT_EQ(a.perfect_complex->ranks, b.perfect_complex->ranks);
    EXPECT_EQ(a.perfect_complex->differentials, b.perfect_complex->differentials);
  }
  EXPECT_EQ(a.map.has_value(), b.map.has_value());
  if (a.map && b.map) {
    EXPECT_TRUE(a.map->target == b.map->target);
    EXPECT_EQ(a.map->assignment, b.map->assignment);
  }
}

TEST(InstanceFile, FixturesRoundTrip) {
  for (const char* name : {"PC4", "SS6", "point"}) {
    for (long long stalk : {0, 4}) {
      cli::Instance inst = cli::fixture(name, stalk, 2);
      std::string text = cli::dump(cli::serialize_instance(inst));
      cli::Instance back = cli::parse_instance_text(text);
      expect_same_instance(inst, back);
      EXPECT_EQ(cli::dump(cli::serialize_instance(back)), text);
    }
  }
}

TEST(InstanceFile, RandomRoundTrip) {
  cli::RandomParams params;
  for (std::uint64_t s = 1; s <= 60; ++s) {
    cli::Instance inst = cli::random_instance(s, params).build("r" + std::to_string(s));
    std::string text = cli::dump(cli::serialize_instance(inst));
    cli::Instance back = cli::parse_instance_text(text);
    expect_same_instance(inst, back);
    EXPECT_EQ(cli::dump(cli::serialize_instance(back)), text);
  }
}

TEST(InstanceFile, GroupForms) {
  auto g = cli::parse_group(Json::parse(R"({"invariant_factors":[2,0]})"), "g");
  EXPECT_EQ(factors(g), (Factors{2, 0}));
  EXPECT_EQ(factors(cli::parse_group(Json::parse("[6]"), "g")), (Factors{6}));
  auto p = cli::parse_group(Json::parse(R"({"ambient_rank":2,"relations":[[2,1],[0,3]]})"), "g");
  EXPECT_EQ(factors(p), (Factors{6}));
  EXPECT_EQ(cli::serialize_group(p)["ambient_rank"], 2);
  EXPECT_EQ(cli::serialize_group(g), Json::parse(R"({"invariant_factors":[2,0]})"));
  EXPECT_THROW(cli::parse_group(Json::parse(R"({"ambient_rank":2,"relations":[[2],[0,3]]})"), "g"), InputError);
  EXPECT_THROW(cli::parse_group(Json::parse(R"({"orders":[2]})"), "g"), InputError);
}

TEST(InstanceFile, Rejections) {
  auto bad = [](const std::string& text) { EXPECT_THROW(cli::parse_instance_text(text), InputError) << text; };
  bad("{");
  bad(R"({"poset":{"elements":["a"]},"sheaf":{"stalks":{}}})");
  bad(R"({"poset":{"elements":["a","a"]},"sheaf":{"stalks":{"a":[0]}}})");
  bad(R"({"poset":{"elements":["a","b"],"relations":[["a","b"],["b","a"]]},"sheaf":{"stalks":{"a":[0],"b":[0]}}})");
  bad(R"({"poset":{"elements":["a"]},"sheaf":{"stalks":{"a":[0]}},"extra":1})");
  bad(R"({"poset":{"elements":["a","b"],"relations":[["a","b"]]},"sheaf":{"stalks":{"a":[0],"b":[0]},)"
      R"("restrictions":[{"from":"a","to":"b","matrix":[[1,2]]}]}})");
  // Z/2 -> Z sending 1 to 1 is not well defined.
  bad(R"({"poset":{"elements":["a","b"],"relations":[["a","b"]]},"sheaf":{"stalks":{"a":[2],"b":[0]},)"
      R"("restrictions":[{"from":"a","to":"b","matrix":[[1]]}]}})");
}

const char* kSquare =
    R"({"name":"square","poset":{"elements":["a","b","c","d"],"relations":[["a","b"],["a","c"],["b","d"],["c","d"]]},)"
    R"("sheaf":{"stalks":{"a":[0],"b":[0],"c":[0],"d":[0]},"restrictions":[)"
    R"({"from":"a","to":"b","matrix":[[1]]},{"from":"a","to":"c","matrix":[[1]]},)"
    R"({"from":"b","to":"d","matrix":[[MID]]},{"from":"c","to":"d","matrix":[[1]]}]},)"
    R"("coefficients":[2]})";

std::string square(const std::string& mid) {
  std::string s = kSquare;
  return s.replace(s.find("MID"), 3, mid);
}

TEST(ExitCodes, Matrix) {
  TempDir dir;
  std::string pc4 = dir.file("pc4.json");
  ASSERT_EQ(run({"fixture", "--name", "PC4", "--stalk", "4", "--coefficients", "2", "--out", pc4}).code, 0);

  Outcome pass = run({"verify", "--input", pc4, "--which", "all"});
  EXPECT_EQ(pass.code, 0) << pass.out << pass.err;

  Outcome fault = run({"verify", "--input", pc4, "--which", "corollary2", "--inject-fault", "--format", "json"});
  EXPECT_EQ(fault.code, 1);
  Json rep = Json::parse(fault.out);
  EXPECT_FALSE(rep["counterexample"].is_null());
  EXPECT_TRUE(rep["counterexample"].contains("instance"));

  EXPECT_EQ(run({"verify", "--input", dir.write("broken.json", "{\"poset\": [")}).code, 2);
  EXPECT_EQ(run({"verify", "--input", dir.file("missing.json")}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "--input", pc4, "--which", "nonsense"}).code, 2);

  EXPECT_EQ(run({"verify", "--input", dir.write("square.json", square("1"))}).code, 0);
  Outcome corrupt = run({"verify", "--input", dir.write("corrupt.json", square("2"))});
  EXPECT_EQ(corrupt.code, 2);
  EXPECT_NE(corrupt.err.find("functoriality violation"), std::string::npos) << corrupt.err;

  Outcome no_map = run({"verify", "--input", pc4, "--which", "projection"});
  EXPECT_EQ(no_map.code, 2);
  EXPECT_NE(no_map.err.find("map"), std::string::npos);

  Outcome rnd_fault = run({"random", "--seed", "3", "--count", "2", "--which", "corollary2", "--inject-fault", "--out",
                       dir.file("rnd.txt")});
  EXPECT_EQ(rnd_fault.code, 1);
  EXPECT_TRUE(std::filesystem::exists(dir.file("rnd.txt.failing-0.json")));
  Json dumped = Json::parse(std::ifstream(dir.file("rnd.txt.failing-0.json")));
  EXPECT_NO_THROW(cli::parse_instance(dumped["instance"]));
}

TEST(Commands, Snf) {
  Outcome r = run({"snf", "--matrix", "[[2,4],[6,8]]"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(2, 4)\n");
  Outcome j = run({"snf", "--matrix", "[[0,0],[0,0]]", "--format", "json"});
  EXPECT_EQ(Json::parse(j.out)["diagonal"], Json::parse("[0,0]"));
  EXPECT_EQ(run({"snf", "--matrix", "[[1,2],[3]]"}).code, 2);
  EXPECT_EQ(run({"snf", "--matrix", "nope"}).code, 2);
}

TEST(Commands, Hnf) {
  Outcome r = run({"hnf", "--matrix", "[[4],[6]]"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "H = [[2],[0]]");
  Json j = Json::parse(run({"hnf", "--matrix", "[[0,1],[2,0]]", "--format", "json"}).out);
  EXPECT_EQ(j["H"], Json::parse("[[2,0],[0,1]]"));
}

TEST(Commands, Cohomology) {
  TempDir dir;
  std::string ss6 = dir.file("ss6.json");
  ASSERT_EQ(run({"fixture", "--name", "SS6", "--out", ss6}).code, 0);
  Outcome t = run({"cohomology", "--input", ss6});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("H^0 = [0]"), std::string::npos) << t.out;
  Json j = Json::parse(run({"cohomology", "--input", ss6, "--format", "json"}).out);
  EXPECT_EQ(j["cohomology"]["0"], Json::parse("[0]"));
  EXPECT_EQ(j["cohomology"]["1"], Json::array());
  EXPECT_EQ(j["cohomology"]["2"], Json::parse("[0]"));

  std::string pc4 = dir.file("pc4.json");
  ASSERT_EQ(run({"fixture", "--name", "PC4", "--stalk", "4", "--out", pc4}).code, 0);
  Json k = Json::parse(run({"cohomology", "--input", pc4, "--format", "json"}).out);
  EXPECT_EQ(k["cohomology"]["0"], Json::parse("[4]"));
  EXPECT_EQ(k["cohomology"]["1"], Json::parse("[4]"));
}

TEST(Commands, RandomEmptyAndDeterministic) {
  Outcome empty = run({"random", "--seed", "1", "--count", "0", "--format", "json"});
  EXPECT_EQ(empty.code, 0);
  Json e = Json::parse(empty.out);
  EXPECT_TRUE(e["instances"].empty());
  EXPECT_EQ(e["summary"]["pass"], 0);

  Outcome a = run({"random", "--seed", "11", "--count", "8", "--format", "json"});
  Outcome b = run({"random", "--seed", "11", "--count", "8", "--format", "json"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  Outcome c = run({"random", "--seed", "12", "--count", "8", "--format", "json"});
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(run({"random", "--max-elements", "9"}).code, 2);
}

TEST(Commands, FixturesVerify) {
  for (const char* name : {"PC4", "SS6", "point"})
    for (long long stalk : {0, 2, 4})
      for (long long a : {0, 2, 3}) {
        cli::Instance inst = cli::fixture(name, stalk, a);
        cli::VerifyRequest req;
        req.which = cli::Which::kCorollary3;
        auto rep = cli::verify_instance(inst, req);
        EXPECT_TRUE(rep.passed()) << rep.to_text();
        req.which = cli::Which::kTheorem1;
        EXPECT_TRUE(cli::verify_instance(inst, req).passed());
      }
}

}  // namespace
}  // namespace sheafcoh
