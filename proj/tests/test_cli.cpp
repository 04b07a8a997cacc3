#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "pwc/commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using pwc::cli::Options;

namespace {

struct TempDir {
  fs::path root;
  TempDir() {
    static int counter = 0;
    root = fs::temp_directory_path() / ("pwc_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(root);
  }
  ~TempDir() { fs::remove_all(root); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = root / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (root / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string doc(const std::string& boxes) { return R"({"dim": 1, "boxes": )" + boxes + "}"; }

Options opts(const TempDir& t, const std::string& s1, const std::string& s2, const std::string& out) {
  Options o;
  o.s1_file = t.write("s1.json", doc(s1));
  o.s2_file = t.write("s2.json", doc(s2));
  o.out = t.path(out);
  return o;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("decide exit codes and report") {
    TempDir t;
    std::ostringstream err;
    Options o = opts(t, "[[0, 1]]", "[[2, 3]]", "r.json");
    CHECK(pwc::cli::cmd_decide(o, err) == 0);
    const json r = json::parse(slurp(o.out));
    CHECK(r["command"] == "decide");
    CHECK(r["certificate"]["verdict"] == "Contractive");
    CHECK(r["certificate"]["condition_set"] == json::parse(R"([[["-1", "2"]]])"));
    CHECK(r["inputs_digest"].get<std::string>().size() == 16);

    o.p = "6";
    CHECK(pwc::cli::cmd_decide(o, err) == 3);
    const json r6 = json::parse(slurp(o.out));
    CHECK(r6["certificate"]["verdict"] == "NotContractive");
    CHECK(r6["certificate"]["obstruction_measure"] == "1");

    Options bad = opts(t, "[[0, 2]]", "[[1, 3]]", "bad.json");
    CHECK(pwc::cli::cmd_decide(bad, err) == 2);

    Options usage = opts(t, "[[3, \"5/2\"]]", "[[4, 5]]", "u.json");
    std::ostringstream uerr;
    CHECK(pwc::cli::cmd_decide(usage, uerr) == 1);
    CHECK(uerr.str().find("line 1, column") != std::string::npos);

    o.p = "0.5";
    CHECK(pwc::cli::cmd_decide(o, err) == 1);
  }

  TEST_CASE("verify agrees with the verdict on small integer gaps") {
    TempDir t;
    std::ostringstream err;
    for (int n = 2; n <= 5; ++n) {
      for (int k = 2; k <= 4; ++k) {
        Options o = opts(t, "[[0, 1]]", "[[" + std::to_string(n) + ", " + std::to_string(n + 1) + "]]", "v.json");
        o.p = std::to_string(2 * k);
        o.trials = 100;
        o.iterations = 150;
        o.restarts = 3;
        o.lattice_L = "8";
        const int code = pwc::cli::cmd_verify(o, err);
        const json r = json::parse(slurp(o.out));
        CAPTURE(n);
        CAPTURE(k);
        CHECK(r["status"] == "CONSISTENT");
        CHECK(code == (n < k ? 3 : 0));
      }
    }
  }

  TEST_CASE("verify is deterministic across thread counts") {
    TempDir t;
    std::ostringstream err;
    Options o = opts(t, "[[0, 1]]", "[[\"3/2\", \"5/2\"]]", "a.json");
    o.trials = 200;
    o.iterations = 100;
    o.restarts = 4;
    o.threads = 1;
    CHECK(pwc::cli::cmd_verify(o, err) == 3);
    const std::string one = slurp(o.out);
    o.threads = 4;
    CHECK(pwc::cli::cmd_verify(o, err) == 3);
    CHECK(slurp(o.out) == one);
    CHECK(json::parse(one).contains("witness_spectrum"));

    o.p = "inf";
    CHECK(pwc::cli::cmd_verify(o, err) == 1);

    Options thin = opts(t, "[[0, 1]]", "[[\"3/2\", \"25/16\"]]", "thin.json");
    thin.lattice_L = "8";
    thin.trials = 10;
    CHECK(pwc::cli::cmd_verify(thin, err) == 4);
    CHECK(json::parse(slurp(thin.out))["status"] == "INCONCLUSIVE");
  }

  TEST_CASE("witness paths") {
    TempDir t;
    std::ostringstream err;
    Options o = opts(t, "[[0, 1]]", "[[\"3/2\", \"5/2\"]]", "w.json");
    CHECK(pwc::cli::cmd_witness(o, err) == 3);
    const json r = json::parse(slurp(o.out));
    CHECK(r["witness"]["kind"] == "EvenP");
    CHECK(r["witness"]["certified"] == true);

    o.p = "inf";
    CHECK(pwc::cli::cmd_witness(o, err) == 3);
    CHECK(json::parse(slurp(o.out))["witness"]["kind"] == "PInf");

    Options far = opts(t, "[[0, 1]]", "[[4, 5]]", "far.json");
    CHECK(pwc::cli::cmd_witness(far, err) == 0);
    CHECK(json::parse(slurp(far.out))["witness"].is_null());
  }

  TEST_CASE("sweep tables") {
    TempDir t;
    std::ostringstream err;
    Options o = opts(t, "[[0, 1], [2, 3]]", "[[10, 11]]", "s.csv");
    o.k_max = 6;
    CHECK(pwc::cli::cmd_sweep(o, err) == 0);
    std::istringstream rows(slurp(o.out));
    std::string line;
    std::getline(rows, line);
    CHECK(line == "k,p,obstruction_measure,verdict");
    std::vector<std::string> verdicts;
    while (std::getline(rows, line)) verdicts.push_back(line.substr(line.rfind(',') + 1));
    CHECK(verdicts == std::vector<std::string>{"Contractive", "Contractive", "Contractive", "NotContractive", "NotContractive",
                                               "NotContractive"});

    Options flat = opts(t, "[[0, 1]]", "[[10, 10]]", "flat.csv");
    flat.k_max = 5;
    CHECK(pwc::cli::cmd_sweep(flat, err) == 0);
    CHECK(slurp(flat.out).find("NotContractive") == std::string::npos);

    Options gap = opts(t, "[[0, 1]]", "[[4, 5]]", "gap.csv");
    gap.k_max = 6;
    CHECK(pwc::cli::cmd_sweep(gap, err) == 0);
    const std::string g = slurp(gap.out);
    CHECK(g.find("4,8,0,Contractive") != std::string::npos);
    CHECK(g.find("5,10,1,NotContractive") != std::string::npos);

    gap.k_max = 0;
    CHECK(pwc::cli::cmd_sweep(gap, err) == 1);
  }
}
