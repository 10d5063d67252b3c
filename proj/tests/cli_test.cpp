#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ztwo/cli.hpp"

using namespace ztwo;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

fs::path temp_path(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ztwo_cli_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove(p);
  return p;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { ::unsetenv("ZTWO_CACHE"); }
};

}  // namespace

TEST_F(CliTest, Classify) {
  auto r = run({"classify", "209"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "A2 p=11 q=19 (p/q)=+1\n");
  EXPECT_EQ(run({"classify", "21"}).out, "UNCLASSIFIED\n");
  EXPECT_EQ(run({"classify", "89"}).out, "A1 p=89 (2/p)_4=+1\n");
  EXPECT_EQ(run({"classify", "247"}).out, "B p=13 q=19 (p/q)=-1\n");
  EXPECT_EQ(run({"classify", "7"}).out, "C7 p=7\n");
  r = run({"classify", "45"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("not squarefree"), std::string::npos);
  EXPECT_EQ(run({"classify", "10"}).code, 1);
  EXPECT_EQ(run({"classify", "abc"}).code, 1);
  EXPECT_EQ(run({"classify", "-5"}).code, 1);
}

TEST_F(CliTest, Predict) {
  auto r = run({"predict", "55", "--n", "2", "--tower", "L", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("shape"), json::array({16}));
  EXPECT_EQ(j.at("schema"), "ztwo/1");

  r = run({"predict", "89", "--n", "1", "--tower", "both"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0].rfind("L: [2,4]", 0), 0u) << ls[0];
  EXPECT_EQ(ls[1].rfind("K: [2,8]", 0), 0u) << ls[1];

  EXPECT_EQ(run({"predict", "7", "--n", "1", "--tower", "L"}).code, 2);
  EXPECT_EQ(run({"predict", "21"}).code, 2);
  EXPECT_EQ(run({"predict", "89", "--n", "0"}).code, 1);
  EXPECT_EQ(run({"predict", "89", "--tower", "M"}).code, 1);
}

TEST_F(CliTest, Scan) {
  auto r = run({"scan", "--min", "3", "--max", "100", "--family", "B", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.front(), cli::kCsvHeader);
  std::vector<std::string> ds;
  for (std::size_t i = 1; i < ls.size(); ++i) ds.push_back(ls[i].substr(0, ls[i].find(',')));
  EXPECT_EQ(ds, (std::vector<std::string>{"15", "39", "55", "87", "95"}));
  EXPECT_EQ(ls[5], "95,B,5,19,4,4,16,16,1,3,3");

  r = run({"scan", "--min", "3", "--max", "3"});
  ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1], "3,UNCLASSIFIED,,,,,,,,,");

  r = run({"scan", "--min", "200", "--max", "250", "--family", "A2"});
  EXPECT_NE(r.out.find("\n209,A2,11,19,3,3,2x4,2x8,1,2,3\n"), std::string::npos) << r.out;

  r = run({"scan", "--min", "3", "--max", "40", "--format", "json"});
  for (const auto& l : lines(r.out)) EXPECT_EQ(json::parse(l).at("schema"), "ztwo/1");

  EXPECT_EQ(run({"scan", "--min", "10", "--max", "5"}).code, 1);
  EXPECT_EQ(run({"scan", "--max", "2000000"}).code, 1);
  EXPECT_EQ(run({"scan", "--format", "xml"}).code, 1);
}

TEST_F(CliTest, ScanIsByteIdenticalAcrossRunsAndThreadCounts) {
  const auto a = run({"scan", "--min", "3", "--max", "3000", "--threads", "1"});
  const auto b = run({"scan", "--min", "3", "--max", "3000", "--threads", "7"});
  const auto c = run({"scan", "--min", "3", "--max", "3000"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out.find("\n23,C7,23,,,,cyclic,,1,,\n"), std::string::npos);
}

TEST_F(CliTest, ClassgroupAndSymbols) {
  auto r = run({"classgroup", "-55"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "D=-55 h=4 divisors [4] h2=4 two_rank=1\n");
  EXPECT_EQ(run({"classgroup", "-12"}).code, 1);
  EXPECT_EQ(run({"classgroup", "55"}).code, 1);
  EXPECT_EQ(run({"symbol", "--quartic", "11", "5"}).out, "+1\n");
  EXPECT_EQ(run({"symbol", "--jacobi", "-2", "7"}).out, "-1\n");
  EXPECT_EQ(run({"symbol", "--quartic2", "89"}).out, "-1\n");
  EXPECT_EQ(run({"symbol", "--jacobi", "3", "8"}).code, 1);
  EXPECT_EQ(run({"symbol", "--quartic", "2", "5"}).code, 1);
  EXPECT_EQ(run({"symbol"}).code, 1);
}

TEST_F(CliTest, Witness) {
  auto j = json::parse(run({"witness", "pell", "89"}).out);
  EXPECT_EQ(pell_from_json(j), (PellRepresentation{89, 17, 10}));
  j = json::parse(run({"witness", "kaplan", "11", "19"}).out);
  EXPECT_EQ(kaplan_from_json(j), (KaplanParams{11, 19, 1, 3, -1, 4, 1}));
  j = json::parse(run({"witness", "legendre", "5", "19"}).out);
  EXPECT_EQ(legendre_from_json(j), (LegendreSolution{5, 19, 1, 2, 9}));
  EXPECT_EQ(j.at("criterion"), 1);
  EXPECT_EQ(run({"witness", "pell", "3"}).code, 1);
  EXPECT_EQ(run({"witness", "kaplan", "5", "19"}).code, 1);
  EXPECT_EQ(run({"witness", "legendre", "5"}).code, 1);
}

TEST_F(CliTest, Verify) {
  auto r = run({"verify", "--max", "5000", "--suite", "corollary"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("violations 0"), std::string::npos);
  r = run({"verify", "--max", "1500", "--suite", "all"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("oracle: checked"), std::string::npos);
  EXPECT_NE(r.out.find("williams: checked"), std::string::npos);
}

TEST_F(CliTest, JsonRoundTrip) {
  const auto cg = class_group(qforms::discriminant_of(-407));
  EXPECT_EQ(class_group_from_json(json::parse(to_json(cg).dump())), cg);
  for (u64 d : {89, 209, 247, 55, 95, 7, 21}) {
    const auto tag = classifier::classify(d);
    EXPECT_EQ(family_tag_from_json(json::parse(to_json(tag).dump())), tag);
  }
  for (u64 d : {89, 247, 7})
    for (int n : {1, 5}) {
      const auto p = classifier::predict(d, n, Tower::L);
      EXPECT_EQ(prediction_from_json(json::parse(to_json(p).dump())), p);
    }
  const auto inv = classifier::iwasawa_invariants(classifier::classify(89), Tower::K);
  EXPECT_EQ(iwasawa_from_json(json::parse(to_json(inv).dump())), inv);
  const auto k = diophantine::solve_kaplan(3, 11);
  EXPECT_EQ(kaplan_from_json(json::parse(to_json(k).dump())), k);
  const LegendreSolution big{37, 11, 1, 56518, 187449};
  EXPECT_EQ(legendre_from_json(json::parse(to_json(big).dump())), big);

  auto bad = to_json(cg);
  bad["schema"] = "ztwo/0";
  EXPECT_THROW(class_group_from_json(bad), Error);
}

TEST_F(CliTest, CacheGivesIdenticalOutputs) {
  const auto path = temp_path("cache.jsonl");
  const std::vector<std::string> cmds[] = {
      {"predict", "407"}, {"classgroup", "-712"}, {"scan", "--min", "3", "--max", "600"}, {"verify", "--max", "800"}};
  for (const auto& cmd : cmds) {
    std::vector<std::string> with{"--cache", path.string()};
    with.insert(with.end(), cmd.begin(), cmd.end());
    const auto plain = run(cmd), first = run(with), second = run(with);
    EXPECT_EQ(plain.out, first.out);
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(first.code, second.code);
  }
  ClassGroupCache cache(path);
  EXPECT_GT(cache.size(), 10u);
  EXPECT_EQ(cache.skipped_lines(), 0u);
  // one record per D, and each reproduces on recomputation
  std::size_t lines_in_file = 0;
  std::ifstream in(path);
  for (std::string l; std::getline(in, l);) ++lines_in_file;
  EXPECT_EQ(lines_in_file, cache.size());
  const auto rec = cache.find(-712);
  ASSERT_TRUE(rec.has_value());
  const auto fresh = class_group(qforms::discriminant_of(-178));
  EXPECT_TRUE(rec->same_data(CacheRecord{fresh.D.value, fresh.h, fresh.divisors, "other"}));

  ::setenv("ZTWO_CACHE", path.string().c_str(), 1);
  EXPECT_EQ(run({"classgroup", "-712"}).out, run({"--cache", path.string(), "classgroup", "-712"}).out);
  ::unsetenv("ZTWO_CACHE");
  fs::remove(path);
}

TEST_F(CliTest, CacheSkipsCorruptLines) {
  const auto path = temp_path("corrupt.jsonl");
  {
    std::ofstream out(path);
    out << R"({"D":-55,"h":4,"divisors":[4],"computed_at":"2026-01-01T00:00:00Z"})" << "\n";
    out << "{not json\n";
    out << R"({"D":-84,"h":4,"divisors":[4],"computed_at":"x"})" << "\n";  // wrong structure, still consistent
    out << R"({"D":-95,"h":7,"divisors":[8],"computed_at":"x"})" << "\n";  // product != h
    out << R"({"h":1})" << "\n";
  }
  std::ostringstream warn;
  ClassGroupCache cache(path, warn);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.skipped_lines(), 3u);
  EXPECT_NE(warn.str().find("skipping corrupt cache line"), std::string::npos);

  const auto r = run({"--cache", path.string(), "classgroup", "-55"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "D=-55 h=4 divisors [4] h2=4 two_rank=1\n");
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  fs::remove(path);
}

TEST_F(CliTest, ConcurrentCacheUseKeepsOneRecordPerD) {
  const auto path = temp_path("threads.jsonl");
  {
    ClassGroupCache cache(path);
    classifier::CrossCheckOptions opt;
    opt.threads = 8;
    opt.oracle = cache.oracle();
    EXPECT_EQ(classifier::cross_check(3000, opt).violation_count(), 0u);
  }
  ClassGroupCache reload(path);
  std::size_t n = 0;
  std::ifstream in(path);
  for (std::string l; std::getline(in, l);) ++n;
  EXPECT_EQ(n, reload.size());
  EXPECT_EQ(reload.skipped_lines(), 0u);
  fs::remove(path);
}

#ifdef ZTWO_CLI_PATH
// The installed binary maps errors to the documented exit codes.
TEST_F(CliTest, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(ZTWO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("classify 209"), 0);
  EXPECT_EQ(status("classify 45"), 1);
  EXPECT_EQ(status("predict 7"), 2);
  EXPECT_EQ(status("verify --max 500"), 0);
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status(""), 1);
}
#endif
