#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <unistd.h>

#include "qca/fixtures.hpp"
#include "qca/io.hpp"
#include "support/cli.hpp"

using namespace qca;
using cli::quote;
using cli::run;

namespace {

const std::string kSamples = QCA_SAMPLES_DIR;

std::string seed_path(const std::string& name) { return kSamples + "/seeds/" + name + ".json"; }
std::string seed(const std::string& name) { return "--seed " + quote(seed_path(name)); }

// Scratch file removed on scope exit.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& text) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("qca_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
    cli::spit(path.string(), text);
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string arg() const { return "--seed " + quote(path.string()); }
};

io::Json json_of(const cli::Result& r) { return io::parse(r.out); }

}  // namespace

TEST_CASE("fixture output matches the library and sample files", "[cli]") {
  const auto sl2 = run("fixture sl2 --w1 3 --w2 1");
  CHECK(sl2.exit == 0);
  CHECK(sl2.out == io::pretty(io::encode_seed(fixtures::sl2(3, 1))));
  CHECK(sl2.out == cli::slurp(seed_path("sl2")));
  CHECK(run("fixture ex5x2 --a 1 --b 1").out == cli::slurp(seed_path("ex5x2")));
  CHECK(run("fixture rank2free").out == cli::slurp(seed_path("rank2free")));
  CHECK(run("fixture sl2 --w1 1 --w2 1").out == cli::slurp(seed_path("sl2_trivial")));
  CHECK(run("fixture nope").exit == 3);
}

TEST_CASE("mutate", "[cli]") {
  const std::string input = cli::slurp(seed_path("sl2"));
  const auto r = run("mutate " + seed("sl2") + " --sequence 0");
  CHECK(r.exit == 0);
  CHECK(r.out ==
        "{\n"
        "  \"m\": 3,\n"
        "  \"n\": 1,\n"
        "  \"B\": [[0],[-1],[-1]],\n"
        "  \"Lambda\": [[0,1,1],[-1,0,0],[-1,0,0]],\n"
        "  \"W\": [[0,3,1],[-3,0,0],[-1,0,0]]\n"
        "}\n");
  CHECK(run("mutate " + seed("sl2") + " --sequence ''").out == input);
  CHECK(run("mutate " + seed("sl2") + " --sequence 0,0").out == input);

  // Non-canonical layout is echoed canonically.
  const TempFile compact(io::encode_seed(fixtures::sl2(3, 1)).dump());
  CHECK(run("mutate " + compact.arg() + " --sequence ''").out == input);

  // Longer sequences agree with the library.
  const auto t = fixtures::ex5x2(1, 1);
  CHECK(run("mutate " + seed("ex5x2") + " --sequence 0,1,0,1").out ==
        io::pretty(io::encode_seed(apply_sequence(t, {0, 1, 0, 1}))));
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(run("mutate " + seed("sl2") + " --sequence 1").exit == 3);
  CHECK(run("mutate " + seed("sl2") + " --sequence x").exit == 3);
  CHECK(run("mutate " + seed("sl2")).exit == 3);
  CHECK(run("frobnicate").exit == 3);
  CHECK(run("").exit == 3);
  CHECK(run("check " + seed("malformed")).exit == 2);
  CHECK(run("check " + seed("incompatible")).exit == 2);
  CHECK(run("check --seed /nonexistent/seed.json").exit == 2);
  const TempFile garbage("{ not json");
  CHECK(run("mutate " + garbage.arg() + " --sequence 0").exit == 2);
  const TempFile unknown_key(R"({"m":2,"n":2,"B":[[0,1],[-1,0]],"Lambda":[[0,1],[-1,0]],"extra":0})");
  CHECK(run("mutate " + unknown_key.arg() + " --sequence 0").exit == 2);
  CHECK(run("check " + seed("c2_violation") + " --depth 1").exit == 1);
  CHECK(run("oracle " + seed("sl2") + " --direction 2").exit == 3);
  // Errors go to stderr, stdout stays empty.
  CHECK(run("check " + seed("malformed")).out.empty());
  CHECK(run("check " + seed("malformed"), "", true).out.find("Parse") != std::string::npos);
}

TEST_CASE("stdin and QCA_DEPTH", "[cli]") {
  const auto via_file = run("check " + seed("sl2") + " --depth 2");
  const auto via_stdin = run("check --seed - --depth 2", "cat " + quote(seed_path("sl2")) + " |");
  CHECK(via_stdin.exit == 0);
  CHECK(via_stdin.out == via_file.out);

  CHECK(json_of(run("check " + seed("ex5x2"))).at("report").at("depth_checked") == 4);
  CHECK(json_of(run("check " + seed("ex5x2"), "QCA_DEPTH=2")).at("report").at("depth_checked") == 2);
  // An explicit flag wins.
  CHECK(json_of(run("check " + seed("ex5x2") + " --depth 1", "QCA_DEPTH=2")).at("report").at("depth_checked") == 1);
  CHECK(run("check " + seed("ex5x2"), "QCA_DEPTH=many").exit == 3);
}

TEST_CASE("check", "[cli]") {
  const auto sl2 = run("check " + seed("sl2") + " --depth 5");
  CHECK(sl2.exit == 0);
  const io::Json j = json_of(sl2);
  CHECK(j["report"]["pass"] == true);
  CHECK(j["report"]["depth_checked"] == 5);
  CHECK(j["report"]["class_exhausted"] == true);
  CHECK(j["triviality"]["trivial"] == false);
  CHECK(json_of(run("check " + seed("sl2_trivial")))["triviality"]["trivial"] == true);

  const auto ex = run("check " + seed("ex5x2") + " --depth 4");
  CHECK(ex.exit == 0);
  const io::Json e = json_of(ex);
  CHECK(e["report"]["pass"] == true);
  CHECK(e["triviality"]["trivial"] == false);
  CHECK(e["triviality"]["witness"] == io::Json::parse("[2,3,4]"));

  // Ω in place of W.
  CHECK(run("check " + seed("sl2_omega") + " --depth 5").out == sl2.out);

  const auto bad = run("check " + seed("c2_violation") + " --depth 2");
  CHECK(bad.exit == 1);
  const io::Json b = json_of(bad);
  CHECK(b["report"]["pass"] == false);
  REQUIRE_FALSE(b["report"]["failures"].empty());
  const io::Json& first = b["report"]["failures"][0];
  CHECK(first["sequence"].empty());
  CHECK(first["condition"] == "C2");
  CHECK(first["indices"].size() == 3);

  const io::Json ni = json_of(run("check " + seed("nonintegral_omega")));
  CHECK(ni["report"]["omega_integral"] == false);
  CHECK(ni["report"]["failures"][0]["condition"] == "OmegaIntegral");

  const auto blocks = run("check " + seed("block4free") + " --depth 3");
  CHECK(blocks.exit == 0);
  CHECK(json_of(blocks)["triviality"]["trivial"] == true);
}

TEST_CASE("solve-w", "[cli]") {
  const auto r = run("solve-w " + seed("sl2"));
  CHECK(r.exit == 0);
  const io::Json j = json_of(r);
  REQUIRE(j["dimension"] == 2);
  // The basis spans {(w1, w2)}: the two vectors read off W(0,1), W(0,2) are unimodular.
  const io::Json& b = j["basis"];
  const long long x1 = -b[0]["W"][0][1].get<long long>(), y1 = -b[0]["W"][0][2].get<long long>();
  const long long x2 = -b[1]["W"][0][1].get<long long>(), y2 = -b[1]["W"][0][2].get<long long>();
  CHECK(std::abs(x1 * y2 - x2 * y1) == 1);
  for (const auto& c : b) CHECK(c["certified"] == true);

  const io::Json r2 = json_of(run("solve-w " + seed("rank2free")));
  REQUIRE(r2["dimension"] == 1);
  const io::Json L = io::encode(fixtures::rank2free().Lambda());
  CHECK((r2["basis"][0]["W"] == L || r2["basis"][0]["W"] == io::encode(-fixtures::rank2free().Lambda())));
  CHECK(r2["basis"][0]["triviality"]["trivial"] == true);
  CHECK(run("solve-w " + seed("malformed")).exit == 2);
}

TEST_CASE("decompose", "[cli]") {
  const io::Json j = json_of(run("decompose " + seed("block4free")));
  CHECK(j["decomposable"] == true);
  CHECK(j["theta_pass"] == true);
  REQUIRE(j["blocks"].size() == 2);
  CHECK(j["blocks"][1]["indices"] == io::Json::parse("[2,3]"));
  CHECK(json_of(run("decompose " + seed("ex5x2")))["decomposable"] == false);
}

TEST_CASE("extend", "[cli]") {
  const auto r = run("extend " + seed("rank2free") + " --rows 0,0,1,1 --depth 4");
  CHECK(r.exit == 0);
  const io::Json j = json_of(r);
  CHECK(j["report"]["pass"] == true);
  CHECK(j["triviality"]["trivial"] == false);
  CHECK(j["seed"]["m"] == 8);
  const IntMatrix P = io::decode_matrix(j["P"], 6, 6, "P");
  CHECK_FALSE(P.is_zero());
  CHECK(is_skew_symmetric(P));
  // The emitted seed is itself a valid triple.
  const TempFile ext(j["seed"].dump());
  CHECK(run("check " + ext.arg() + " --depth 2").exit == 0);

  CHECK(run("extend " + seed("rank2free") + " --almost --rows 0,1,0,1 --depth 2").exit == 0);
  CHECK(run("extend " + seed("rank2free") + " --almost --rows 0,1,0 --depth 2").exit == 3);
  CHECK(run("extend " + seed("rank2free") + " --rows 0,5 --depth 2").exit == 3);
}

TEST_CASE("oracle", "[cli]") {
  const auto r = run("oracle " + seed("sl2") + " --direction 0");
  CHECK(r.exit == 0);
  const io::Json j = json_of(r);
  CHECK(j["all_equal"] == true);
  CHECK(j["entries"].size() == 2);
  CHECK(run("oracle " + seed("sl2_omega") + " --direction 0").out == r.out);
  CHECK(run("oracle " + seed("ex5x2") + " --direction 1").exit == 0);

  const io::Json z = json_of(run("oracle " + seed("zero_omega") + " --direction 0"));
  CHECK(z["all_equal"] == true);
  for (const auto& e : z["entries"]) {
    CHECK(e["direct"].empty());
    CHECK(e["leibniz"].empty());
  }

  const auto bad = run("oracle " + seed("sl2_omega_corrupted") + " --direction 0");
  CHECK(bad.exit == 1);
  const io::Json b = json_of(bad);
  CHECK(b["all_equal"] == false);
  bool mismatch = false;
  for (const auto& e : b["entries"]) mismatch = mismatch || e["equal"] == false;
  CHECK(mismatch);
}

TEST_CASE("every command is deterministic", "[cli]") {
  for (const std::string& args : cli::suite(kSamples)) {
    const auto a = run(args);
    const auto b = run(args);
    INFO(args);
    CHECK(a.exit == b.exit);
    CHECK(a.out == b.out);
  }
}
