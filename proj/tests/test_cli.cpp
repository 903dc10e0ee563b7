#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

std::string g_cli;
std::string g_data;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

/* run the CLI with the given argument string, capturing stdout (and stderr
 * when combine is set) */
RunResult run_cli(const std::string& args, bool combine = false) {
    std::string cmd = "\"" + g_cli + "\" " + args + (combine ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    RunResult r;
    r.out = std::move(out);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return "\"" + g_data + "/" + name + "\""; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string temp_path(const std::string& tag) {
    return "cli_" + tag + "_" + std::to_string(getpid()) + ".json";
}

nlohmann::json parse(const std::string& text) { return nlohmann::json::parse(text); }

} // namespace

TEST_CASE("validate: exit codes and diagnostics") {
    CHECK(run_cli("validate " + data("ws_main.json")).exit_code == 0);
    CHECK(run_cli("validate").exit_code == 0); /* empty workspace is clean */

    RunResult bad = run_cli("validate " + data("ws_bad_object.json"), true);
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("point[0].f0") != std::string::npos);

    RunResult dangling = run_cli("validate " + data("ws_bad_ref.json"), true);
    CHECK(dangling.exit_code == 2);
    CHECK(dangling.out.find("unknown rep 'missing_rep'") != std::string::npos);
    CHECK(dangling.out.find("objects[0]") != std::string::npos);

    CHECK(run_cli("validate " + data("ws_bad_json.json")).exit_code == 2);
    CHECK(run_cli("validate " + data("no_such_file.json")).exit_code == 2);
}

TEST_CASE("validate: json report document") {
    RunResult r = run_cli("validate " + data("ws_main.json"));
    nlohmann::json doc = parse(r.out);
    CHECK(doc["command"] == "validate");
    CHECK(doc["ok"] == true);
    CHECK(doc["violations"].empty());
    CHECK(doc["entities"].get<long>() > 10);
}

TEST_CASE("omega0 over Z reproduces the projective-line golden bytes") {
    RunResult r = run_cli("omega0 P1 " + data("ws_main.json") + " --coeff Z");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == slurp(g_data + "/expected_omega0_p1_z.json"));
    nlohmann::json doc = parse(r.out);
    CHECK(doc["table"]["0"]["finite"]["free_rank"] == 1);
    CHECK(doc["table"]["0"]["action_trivial"] == true);
    CHECK(doc["table"]["3"]["divisible"][0]["rank"] == 1);
    CHECK(doc["table"]["3"]["divisible"][0]["twist"] == -1);
    CHECK(doc["table"].size() == 2);
    CHECK(doc["verdict"]["constructible"] == false);
    CHECK(doc["verdict"]["witness"] == 3);
}

TEST_CASE("omega0 over Q collapses to degree zero") {
    RunResult r = run_cli("omega0 P1 " + data("ws_main.json") + " --coeff Q");
    REQUIRE(r.exit_code == 0);
    nlohmann::json doc = parse(r.out);
    CHECK(doc["table"].size() == 1);
    CHECK(doc["table"]["0"]["finite"]["free_rank"] == 1);
    CHECK(doc["verdict"]["constructible"] == true);
}

TEST_CASE("omega0 with a twist reports the twisted table") {
    RunResult r = run_cli("omega0 P1 " + data("ws_main.json") + " --coeff Z --twist 1");
    REQUIRE(r.exit_code == 0);
    nlohmann::json doc = parse(r.out);
    CHECK(doc["twist"] == 1);
    CHECK(!doc["table"].contains("0"));
    CHECK(doc["table"].contains("1"));
    CHECK(doc["verdict"]["constructible"] == false);
    /* --twist 0 is rejected as a usage error */
    CHECK(run_cli("omega0 P1 " + data("ws_main.json") + " --twist 0").exit_code == 2);
}

TEST_CASE("snc spectral sequence of two lines through a point") {
    RunResult r = run_cli("snc twolines " + data("ws_main.json") + " --coeff Z");
    REQUIRE(r.exit_code == 0);
    nlohmann::json doc = parse(r.out);
    CHECK(doc["e1"]["d_squared_zero"] == true);
    CHECK(doc["e2"]["d_squared_zero"] == true);
    CHECK(doc["e2"]["degenerate"] == true);
    CHECK(doc["e1"]["entries"]["0,0"]["finite"]["free_rank"] == 2);
    CHECK(doc["e1"]["entries"]["1,0"]["finite"]["free_rank"] == 1);
    CHECK(doc["e2"]["entries"]["0,0"]["finite"]["free_rank"] == 1);
    CHECK(!doc["e2"]["entries"].contains("1,0"));
    CHECK(doc["abutment"]["0"]["finite"]["free_rank"] == 1);
    CHECK(doc["abutment"]["3"]["divisible"].size() == 2);
    CHECK(!doc.contains("shriek"));

    RunResult s = run_cli("snc twolines " + data("ws_main.json") + " --coeff Z --shriek 0");
    REQUIRE(s.exit_code == 0);
    nlohmann::json sdoc = parse(s.out);
    CHECK(sdoc["shriek"]["r"] == 0);
    CHECK(sdoc["shriek"]["columns"].is_array());
    CHECK(sdoc["shriek"]["columns"].size() == 2);
}

TEST_CASE("cone counterexample reports") {
    RunResult e = run_cli("cone E " + data("ws_main.json") + " --ell 5");
    REQUIRE(e.exit_code == 0);
    CHECK(e.out == slurp(g_data + "/expected_cone_e5.json"));
    nlohmann::json edoc = parse(e.out);
    CHECK(edoc["divisible_rank"] == 2);
    CHECK(edoc["constructible"] == false);
    CHECK(edoc["b1"] == 2);

    RunResult a = run_cli("cone A2 " + data("ws_main.json") + " --ell 5");
    REQUIRE(a.exit_code == 0);
    nlohmann::json adoc = parse(a.out);
    CHECK(adoc["divisible_rank"] == 4);
    CHECK(adoc["constructible"] == false);

    /* --ell is required */
    CHECK(run_cli("cone E " + data("ws_main.json")).exit_code == 2);
}

TEST_CASE("heart simple/series goldens") {
    RunResult js = run_cli("heart simple js " + data("ws_main.json"));
    REQUIRE(js.exit_code == 0);
    nlohmann::json jdoc = parse(js.out);
    CHECK(jdoc["simple"] == false);
    CHECK(jdoc["carext"] == false);
    CHECK(jdoc["length"] == 2);

    RunResult wm = run_cli("heart simple wm " + data("ws_main.json"));
    nlohmann::json wdoc = parse(wm.out);
    CHECK(wdoc["simple"] == true);
    CHECK(wdoc["carext"] == true);
    CHECK(wdoc["length"] == 1);

    /* weightless motive of the nodal curve: carext but not simple */
    RunResult wn = run_cli("heart simple wmn " + data("ws_main.json"));
    nlohmann::json ndoc = parse(wn.out);
    CHECK(ndoc["simple"] == false);
    CHECK(ndoc["carext"] == true);
    CHECK(ndoc["length"] == 2);

    RunResult ser = run_cli("heart series js " + data("ws_main.json"));
    REQUIRE(ser.exit_code == 0);
    CHECK(ser.out == slurp(g_data + "/expected_heart_series_js.json"));
    nlohmann::json sdoc = parse(ser.out);
    CHECK(sdoc["length"] == 2);
    /* socle first: the point object, then the intermediate extension */
    CHECK(sdoc["factors"][0]["profile"]["branch"][0] == 0);
    CHECK(sdoc["factors"][1]["profile"]["branch"][0] == 1);
    CHECK(sdoc["factors"][1]["carext"] == true);
}

TEST_CASE("heart kernel/image/iext") {
    RunResult k = run_cli("heart kernel sts " + data("ws_main.json"));
    REQUIRE(k.exit_code == 0);
    nlohmann::json kdoc = parse(k.out);
    CHECK(kdoc["object"]["branch"][0]["finite"]["free_rank"] == 0);
    CHECK(kdoc["object"]["points"][0]["m1"]["finite"]["free_rank"] == 1);
    CHECK(kdoc["object"]["simple"] == true);
    CHECK(kdoc.contains("inclusion"));

    RunResult c = run_cli("heart cokernel sts " + data("ws_main.json"));
    nlohmann::json cdoc = parse(c.out);
    CHECK(cdoc["object"]["profile"]["branch"][0] == 0);
    CHECK(cdoc["object"]["points"][0]["m0"]["finite"]["free_rank"] == 0);
    CHECK(cdoc["object"]["points"][0]["m1"]["finite"]["free_rank"] == 0);

    RunResult im = run_cli("heart image sts " + data("ws_main.json"));
    nlohmann::json idoc = parse(im.out);
    CHECK(idoc["object"]["simple"] == true);
    CHECK(idoc["object"]["carext"] == true);

    RunResult ie = run_cli("heart iext js " + data("ws_main.json"));
    nlohmann::json edoc = parse(ie.out);
    CHECK(edoc["object"]["simple"] == true);
    CHECK(edoc["object"]["carext"] == true);
    /* the image of shriek-to-star IS the intermediate extension */
    CHECK(idoc["object"] == edoc["object"]);
}

TEST_CASE("heart truncate places heart objects in perverse degree zero") {
    RunResult r = run_cli("heart truncate js " + data("ws_main.json"));
    REQUIRE(r.exit_code == 0);
    nlohmann::json doc = parse(r.out);
    CHECK(doc["shift"] == 0);
    CHECK(doc["perverse_cohomology"]["0"]["zero"] == false);
    CHECK(doc["perverse_cohomology"]["-1"]["zero"] == true);
    CHECK(doc["perverse_cohomology"]["1"]["zero"] == true);
    CHECK(doc["upper"]["branch"][0].empty());

    RunResult sh = run_cli("heart truncate js " + data("ws_main.json") + " --shift -1");
    nlohmann::json sdoc = parse(sh.out);
    CHECK(sdoc["perverse_cohomology"]["1"]["zero"] == false);
    CHECK(sdoc["perverse_cohomology"]["0"]["zero"] == true);
}

TEST_CASE("heart realize guards the prime and tags the result") {
    CHECK(run_cli("heart realize js " + data("ws_main.json") + " --ell 4").exit_code == 1);
    CHECK(run_cli("heart realize js " + data("ws_main.json")).exit_code == 2);
    RunResult r = run_cli("heart realize js " + data("ws_main.json") + " --ell 5");
    REQUIRE(r.exit_code == 0);
    nlohmann::json doc = parse(r.out);
    CHECK(doc["ell"] == 5);
    CHECK(doc["object"]["branch"][0]["finite"]["free_rank"] == 1);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("heart frobnicate js " + data("ws_main.json")).exit_code == 2);
    CHECK(run_cli("omega0 P1 " + data("ws_main.json") + " --coeff Zmod:x").exit_code == 2);
    CHECK(run_cli("omega0 NOPE " + data("ws_main.json")).exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("deterministic byte-identical reports") {
    std::string args = "heart series jreg " + data("ws_main.json");
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    std::string snc_args = "snc twolines " + data("ws_main.json") + " --coeff Zmod:4";
    RunResult c = run_cli(snc_args);
    RunResult d = run_cli(snc_args);
    REQUIRE(c.exit_code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("--out writes exactly the stdout bytes") {
    std::string tmp = temp_path("out");
    RunResult direct = run_cli("omega0 P1 " + data("ws_main.json") + " --coeff Z");
    RunResult filed = run_cli("omega0 P1 " + data("ws_main.json") + " --coeff Z --out " + tmp);
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty()); /* document went to the file */
    CHECK(slurp(tmp) == direct.out);
    std::remove(tmp.c_str());
}

TEST_CASE("canonical serialization round-trips") {
    std::string c1 = temp_path("canon1"), c2 = temp_path("canon2");
    RunResult first = run_cli("validate " + data("ws_main.json") + " --canonical " + c1);
    REQUIRE(first.exit_code == 0);
    RunResult second = run_cli("validate \"" + c1 + "\" --canonical " + c2);
    REQUIRE(second.exit_code == 0);
    CHECK(slurp(c1) == slurp(c2));
    std::remove(c1.c_str());
    std::remove(c2.c_str());
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli <artinperv-binary> <data-dir> [doctest args]\n");
        return 1;
    }
    g_cli = argv[1];
    g_data = argv[2];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 2, argv + 2);
    return ctx.run();
}
