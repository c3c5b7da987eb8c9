#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vort/vort.h"

namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
    fs::path p = fs::path("capi_scratch") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

}  // namespace

TEST_CASE("version string is available") {
    const char* v = vort_version();
    REQUIRE(v != nullptr);
    CHECK(std::strlen(v) > 0);
}

TEST_CASE("a configured run executes and writes its outputs") {
    const std::string dir = scratch("run_ok");
    vort_run* run = vort_run_create("shear_layer");
    REQUIRE(run != nullptr);
    CHECK(vort_run_set_int(run, "nx", 16) == VORT_OK);
    CHECK(vort_run_set_int(run, "ny", 16) == VORT_OK);
    CHECK(vort_run_set_real(run, "tfinal", 0.05) == VORT_OK);
    CHECK(vort_run_set_string(run, "limiter", "bp") == VORT_OK);
    CHECK(vort_run_set_string(run, "out", dir.c_str()) == VORT_OK);
    CHECK(vort_run_execute(run) == VORT_OK);
    CHECK(std::string(vort_run_error(run)).empty());
    CHECK(fs::exists(fs::path(dir) / "steps.csv"));
    CHECK(fs::exists(fs::path(dir) / "manifest"));
    vort_run_destroy(run);
}

TEST_CASE("unknown keys and bad values are config errors with messages") {
    vort_run* run = vort_run_create("shear_layer");
    REQUIRE(run != nullptr);

    CHECK(vort_run_set_int(run, "quorum", 3) == VORT_ERR_CONFIG);
    CHECK(std::string(vort_run_error(run)).size() > 0);

    CHECK(vort_run_set_real(run, "viscosity", 0.1) == VORT_ERR_CONFIG);
    CHECK(vort_run_set_string(run, "limiter", "minmod9") == VORT_ERR_CONFIG);
    CHECK(vort_run_set_string(run, "snapshots", "1,zebra") == VORT_ERR_CONFIG);

    // Valid assignments still work after failed ones.
    CHECK(vort_run_set_string(run, "limiter", "tvb2") == VORT_OK);
    vort_run_destroy(run);
}

TEST_CASE("a rejected limiter name keeps the previous selection") {
    const std::string dir = scratch("run_keep");
    vort_run* run = vort_run_create("shear_layer");
    REQUIRE(run != nullptr);
    CHECK(vort_run_set_int(run, "nx", 16) == VORT_OK);
    CHECK(vort_run_set_int(run, "ny", 16) == VORT_OK);
    CHECK(vort_run_set_real(run, "tfinal", 0.05) == VORT_OK);
    CHECK(vort_run_set_string(run, "limiter", "bp+tvb1") == VORT_OK);
    CHECK(vort_run_set_string(run, "limiter", "bogus") == VORT_ERR_CONFIG);
    CHECK(vort_run_set_string(run, "out", dir.c_str()) == VORT_OK);
    REQUIRE(vort_run_execute(run) == VORT_OK);
    std::ifstream man(fs::path(dir) / "manifest");
    std::string line;
    bool found = false;
    while (std::getline(man, line))
        if (line == "limiter=bp+tvb1") found = true;
    CHECK(found);
    vort_run_destroy(run);
}

TEST_CASE("unknown problems fail at execution") {
    const std::string dir = scratch("run_bad");
    vort_run* run = vort_run_create("heptagon");
    REQUIRE(run != nullptr);
    CHECK(vort_run_set_string(run, "out", dir.c_str()) == VORT_OK);
    CHECK(vort_run_execute(run) == VORT_ERR_CONFIG);
    CHECK(std::string(vort_run_error(run)).find("heptagon") != std::string::npos);
    vort_run_destroy(run);
}

TEST_CASE("null handles are rejected without crashing") {
    CHECK(vort_run_set_int(nullptr, "nx", 8) == VORT_ERR_CONFIG);
    CHECK(vort_run_set_real(nullptr, "tfinal", 1.0) == VORT_ERR_CONFIG);
    CHECK(vort_run_set_string(nullptr, "limiter", "bp") == VORT_ERR_CONFIG);
    CHECK(vort_run_execute(nullptr) == VORT_ERR_CONFIG);
    vort_run_destroy(nullptr);
}
