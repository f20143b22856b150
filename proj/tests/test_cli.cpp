#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(AUDITGAME_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("auditgame_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kCfgA = R"({"types":["L","H"],"prior":[0.5,0.5],"alloc":[50,105],"audit_cost":25,"fine":100})";

}  // namespace

TEST_CASE("solve reports the closed-form misreport rate") {
  Workspace ws;
  const auto cfg = ws.write("a.json", kCfgA);
  const auto r = run("solve --config " + cfg);
  CHECK(r.status == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["profile"]["strategies"][0][0][1] == "5/26");
  CHECK(doc["provenance"] == "lp");

  const auto f = run("solve --mode float --config " + cfg);
  CHECK(f.status == 0);
  CHECK(json::parse(f.out)["profile"]["strategies"][0][0][1].get<double>() == doctest::Approx(5.0 / 26.0));
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  Workspace ws;
  const auto cfg = ws.write("a.json", kCfgA);
  CHECK(run("solve --config " + cfg).out == run("solve --config " + cfg).out);
  const auto a = run("sweep --mode float --workers 1 --qmin-grid 0.05:0.95:0.05");
  const auto b = run("sweep --mode float --workers 6 --qmin-grid 0.05:0.95:0.05");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(run("surface --workers 1").out == run("surface --workers 4").out);
  CHECK(run("verify --samples 20000 --seed 9 --resolution 40 --config " + cfg).out ==
        run("verify --samples 20000 --seed 9 --resolution 40 --config " + cfg).out);
}

TEST_CASE("--out writes the same bytes as stdout") {
  Workspace ws;
  const auto cfg = ws.write("a.json", kCfgA);
  const auto out = ws.path("bounds.csv");
  CHECK(run("bounds --config " + cfg + " --out " + out).status == 0);
  CHECK(read(out) == run("bounds --config " + cfg).out);
}

TEST_CASE("transit sweep dominates at every row") {
  const auto r = run("sweep --workers 4");
  REQUIRE(r.status == 0);
  std::stringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "q_min,c,k,l,cost_no_audit,cost_audit,budget,excess,dominates,reference_line");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find(",true,") != std::string::npos);
  }
  CHECK(rows == 99 * 3 * 3 * 2);
}

TEST_CASE("surface CSV carries the reference values") {
  const auto r = run("surface");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("0.25,25,100,0.576923076923077\n") != std::string::npos);
  CHECK(r.out.find("0.5,150,300,0.731707317073171\n") != std::string::npos);
  CHECK(r.out.find("0.75,150,1000,0.0552486187845304\n") != std::string::npos);
}

TEST_CASE("exit statuses") {
  Workspace ws;
  const auto short_budget = ws.write(
      "n2.json",
      R"({"types":["L","H"],"prior":[0.5,0.5],"alloc":[50,105],"audit_cost":25,"fine":100,"budget":3,"num_users":2,"coalition_size":2})");
  CHECK(run("solve --config " + short_budget).status == 2);
  CHECK(run("verify --config " + short_budget).status == 2);
  const auto probe = run("probe --resolution 30 --config " + short_budget);
  CHECK(probe.status == 0);
  CHECK(json::parse(probe.out)["fraction"] == 1.0);

  const auto low_fine =
      ws.write("lowk.json", R"({"types":["L","H"],"prior":[0.5,0.5],"alloc":[50,105],"audit_cost":25,"fine":10})");
  CHECK(run("solve --config " + low_fine).status == 1);
  CHECK(run("solve --allow-fine-below-cost --config " + low_fine).status == 0);
  CHECK(run("solve --config " + ws.write("bad.json", "{")).status == 1);
  CHECK(run("solve --config " + ws.path("missing.json")).status == 1);
  CHECK(run("solve").status == 1);
  CHECK(run("solve --format yaml --config " + ws.path("bad.json")).status == 1);
  CHECK(run("probe --config " + ws.write("a.json", kCfgA)).status == 1);
  CHECK(run("").status == 1);
}

TEST_CASE("cost with a budget override") {
  Workspace ws;
  const auto cfg = ws.write("a.json", kCfgA);
  const auto r = run("cost --budget 2 --config " + cfg);
  REQUIRE(r.status == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["verdict"] == "not_guaranteed");
  CHECK(doc["budget_component"] == "2");
}

TEST_CASE("ledger round trip through the command line") {
  Workspace ws;
  const auto dir = ws.path("state");
  REQUIRE(run("ledger --dir " + dir + " keygen").status == 0);
  CHECK((fs::status(dir + "/admin.sk").permissions() & (fs::perms::group_all | fs::perms::others_all)) ==
        fs::perms::none);
  CHECK(run("ledger --dir " + dir + " keygen").status == 1);
  REQUIRE(run("ledger keygen --key-out " + ws.path("alice")).status == 0);
  REQUIRE(run("ledger keygen --key-out " + ws.path("bob")).status == 0);
  const auto coin = ws.path("coin.json");
  REQUIRE(run("ledger --dir " + dir + " mint --owner-pk " + ws.path("alice.pk") + " --coin-id 1 --out " + coin)
              .status == 0);
  CHECK(run("ledger --dir " + dir + " mint --owner-pk " + ws.path("alice.pk") + " --coin-id 1").status == 1);

  const auto spend = [&](const std::string& sk, const std::string& tag) {
    const auto req = ws.path("req" + tag + ".json");
    const auto rec = ws.path("rec" + tag + ".json");
    REQUIRE(run("ledger --dir " + dir + " spend begin --coins " + coin + " --goods pass --price 5 --out " + req)
                .status == 0);
    REQUIRE(run("ledger spend sign --request " + req + " --sk " + sk + " --out " + rec).status == 0);
    return run("ledger --dir " + dir + " spend finalize --receipt " + rec);
  };
  const auto wrong_key = spend(ws.path("bob.sk"), "0");
  CHECK(wrong_key.status == 1);
  CHECK(json::parse(wrong_key.out)["reason"] == "bad_signature");
  const auto ok = spend(ws.path("alice.sk"), "1");
  CHECK(ok.status == 0);
  CHECK(json::parse(ok.out)["approved"] == true);
  const auto again = spend(ws.path("alice.sk"), "2");
  CHECK(again.status == 1);
  CHECK(json::parse(again.out)["reason"] == "double_spend");

  const auto audit = run("ledger --dir " + dir + " audit-log");
  CHECK(audit.status == 0);
  CHECK(json::parse(audit.out)["verified"] == 1);
}
