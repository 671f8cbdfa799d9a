#include <doctest.h>

#include <loopcount/action.hpp>
#include <loopcount/cocycle.hpp>
#include <loopcount/invariant.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace loopcount;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("loopcount-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Run the CLI with a scratch cache directory unless the caller overrides it.
RunResult run(const std::string& args, const std::string& cache = "") {
  fs::path out = scratch_dir() / "stdout.txt";
  fs::path err = scratch_dir() / "stderr.txt";
  std::string cache_dir = cache.empty() ? (scratch_dir() / "cache").string() : cache;
  std::string cmd = "LOOPCOUNT_CACHE='" + cache_dir + "' '" + std::string(LOOPCOUNT_BIN) + "' " +
                    args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("count reports") {
  auto r = run("count --q 5 --method formula");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["q"] == 5);
  CHECK(j["method"] == "formula");
  CHECK(j["up_to_isotopy"] == "63");
  CHECK(j["up_to_isomorphism"] == "1044");

  auto rb = run("count --q 3 --method burnside");
  REQUIRE(rb.code == 0);
  auto jb = nlohmann::json::parse(rb.out);
  CHECK(jb["up_to_isotopy"] == "2");
  CHECK(jb["up_to_isomorphism"].is_null());
  CHECK(jb["breakdown"]["group_size"] == "72");

  auto ro = run("count --q 3 --method oracle");
  REQUIRE(ro.code == 0);
  auto jo = nlohmann::json::parse(ro.out);
  CHECK(jo["method"] == "oracle");
  CHECK(jo["up_to_isotopy"] == "2");
  CHECK(jo["up_to_isomorphism"] == "3");

  // --out writes exactly the stdout bytes
  fs::path f = scratch_dir() / "report.json";
  auto rf = run("count --q 5 --method formula --out '" + f.string() + "'");
  REQUIRE(rf.code == 0);
  CHECK(rf.out.empty());
  CHECK(slurp(f) == r.out);
}

TEST_CASE("orbit counts are cached and deterministic") {
  fs::path cache = scratch_dir() / "orbit-cache";
  fs::remove_all(cache);

  auto cold = run("count --q 3 --method orbits", cache.string());
  REQUIRE(cold.code == 0);
  auto j = nlohmann::json::parse(cold.out);
  CHECK(j["up_to_isotopy"] == "2");
  CHECK(j["breakdown"]["classes"] == "2");

  // the cache now holds one validated partition file
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(cache)) files.push_back(e.path());
  REQUIRE(files.size() == 1);
  CHECK(files[0].filename().string().starts_with("orbits-q3-"));
  std::string cached = slurp(files[0]);
  CHECK(cached == partition_to_jsonl(partition_orbits(3, isotopy_generators(3))));

  auto warm = run("count --q 3 --method orbits", cache.string());
  REQUIRE(warm.code == 0);
  CHECK(warm.out == cold.out);
  CHECK(warm.err.empty());

  // a corrupted cache entry is detected and rebuilt
  {
    std::ofstream bad(files[0], std::ios::trunc);
    bad << "{\"rep\":\"0\",\"size\":1}\n";
  }
  auto healed = run("count --q 3 --method orbits", cache.string());
  REQUIRE(healed.code == 0);
  CHECK(healed.out == cold.out);
  CHECK(healed.err.find("failed validation") != std::string::npos);
  CHECK(slurp(files[0]) == cached);

  {
    std::ofstream bad(files[0], std::ios::trunc);
    bad << "not json at all\n";
  }
  auto healed2 = run("count --q 3 --method orbits", cache.string());
  REQUIRE(healed2.code == 0);
  CHECK(healed2.out == cold.out);
  CHECK(slurp(files[0]) == cached);
}

TEST_CASE("exit codes") {
  CHECK(run("count --q 9 --method formula").code == 2);   // not an odd prime
  CHECK(run("count --q 5").code == 2);                    // missing --method
  CHECK(run("count --q 5 --method magic").code == 2);     // bad enum value
  CHECK(run("nope").code == 2);                           // unknown subcommand
  CHECK(run("count --q 5 --method formula --what").code == 2);
  CHECK(run("").code == 2);                               // a subcommand is required
  CHECK(run("--help").code == 0);
  CHECK(run("count --help").code == 0);

  CHECK(run("count --q 7 --method oracle").code == 3);    // oracle capped at q <= 5
  CHECK(run("count --q 7 --method orbits").code == 3);    // 2^36 over the bit cap
  CHECK(run("count --q 5 --method burnside --closure-cap 10").code == 3);
  CHECK(run("export classes --q 7 --out '" + (scratch_dir() / "x").string() + "'").code == 3);

  CHECK(run("verify --q 4").code == 2);                   // single non-prime
  CHECK(run("verify --q 0..2").code == 2);                // empty range
  CHECK(run("verify --q five").code == 2);
  CHECK(run("cayley --q 3 --hex zz").code == 2);
  CHECK(run("cayley --q 3 --hex 777").code == 2);         // wrong digit count
  CHECK(run("count --q 3 --method burnside --generators /nonexistent.json").code == 2);
}

TEST_CASE("verify") {
  auto good = run("verify --q 3");
  REQUIRE(good.code == 0);
  auto j = nlohmann::json::parse(good.out);
  CHECK(j["pass"] == true);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["q"] == 3);
  CHECK(j["results"][0]["pass"] == true);
  // formula + burnside + orbits contribute isotopy entries, formula +
  // baseline contribute isomorphism entries, all checked against the oracle
  CHECK(j["results"][0]["entries"].size() >= 4);

  // the hidden perturbation flag is a negative control: it must fail
  auto bad = run("verify --q 3 --perturb-formula 1");
  CHECK(bad.code == 1);
  auto jb = nlohmann::json::parse(bad.out);
  CHECK(jb["pass"] == false);

  // ranges skip non-primes silently
  auto range = run("verify --q 3..4");
  REQUIRE(range.code == 0);
  auto jr = nlohmann::json::parse(range.out);
  CHECK(jr["results"].size() == 1);

  // q=7: the oracle is out of reach, so methods cross-check the formula;
  // burnside still runs (18816 group elements)
  auto seven = run("verify --q 7");
  REQUIRE(seven.code == 0);
  auto js = nlohmann::json::parse(seven.out);
  CHECK(js["pass"] == true);
  CHECK(seven.err.find("oracle skipped") != std::string::npos);
  bool burnside_entry = false;
  for (auto& e : js["results"][0]["entries"])
    if (e["method"] == "burnside") burnside_entry = true;
  CHECK(burnside_entry);
}

TEST_CASE("cayley output") {
  auto text = run("cayley --q 3 --hex 7");
  REQUIRE(text.code == 0);
  auto expected = extend(unflatten(from_hex(3, "7")));
  CHECK(text.out == table_to_text(expected));

  auto json = run("cayley --q 3 --hex 7 --format json");
  REQUIRE(json.code == 0);
  CHECK(table_from_json(json.out) == expected);

  // identity cocycle gives the cyclic group's canonical table
  auto zero = run("cayley --q 5 --hex 0000");
  REQUIRE(zero.code == 0);
  CHECK(table_from_text(zero.out) == extend(Cocycle(5)));
}

TEST_CASE("export files") {
  fs::path orbits = scratch_dir() / "orbits.jsonl";
  auto r = run("export orbits --q 3 --out '" + orbits.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(slurp(orbits) == partition_to_jsonl(partition_orbits(3, isotopy_generators(3))));
  auto again = run("export orbits --q 3 --out '" + orbits.string() + "'");
  REQUIRE(again.code == 0);
  CHECK(slurp(orbits) == partition_to_jsonl(partition_orbits(3, isotopy_generators(3))));

  // restricted generators give the isomorphism partition
  fs::path isom = scratch_dir() / "isom.jsonl";
  std::string gens = std::string(LOOPCOUNT_SOURCE_DIR) + "/generators/isomorphism_2q.json";
  auto r2 = run("export orbits --q 3 --out '" + isom.string() + "' --generators '" + gens + "'");
  REQUIRE(r2.code == 0);
  CHECK(slurp(isom) == partition_to_jsonl(partition_orbits(3, isomorphism_generators(3))));

  fs::path decomp = scratch_dir() / "decomp.json";
  auto r3 = run("export decomposition --q 7 --out '" + decomp.string() + "'");
  REQUIRE(r3.code == 0);
  auto j = nlohmann::json::parse(slurp(decomp));
  CHECK(j["q"] == 7);
  std::vector<int> degrees;
  for (auto& c : j["components"]) degrees.push_back(c["degree"].get<int>());
  CHECK(degrees == std::vector<int>{1, 3, 3});

  fs::path classes = scratch_dir() / "classes.jsonl";
  auto r4 = run("export classes --q 3 --out '" + classes.string() + "'");
  REQUIRE(r4.code == 0);
  std::istringstream is(slurp(classes));
  std::string line;
  int lines = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 2);
}
