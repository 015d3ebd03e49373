// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cli.hpp"

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"oamlens"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) {
        argv.push_back(s.c_str());
    }
    std::ostringstream out, err;
    Result r;
    r.code = oam::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string fixture(const char* name) { return std::string(OAM_FIXTURE_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        v.push_back(l);
    }
    return v;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"uca-design", "--help"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"uca-design", "--freq-ghz", "abc"}).code == 2);
    CHECK(run({"uca-design", "--eps-r", "2.2", "--h-mm", "0.294"}).code == 2);
    CHECK(run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "0.294", "--format", "xml"}).code == 2);
}

TEST_CASE("uca-design") {
    const auto r = run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "0.294"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["tool"] == "oamlens 0.1.0");
    CHECK(j["W_P_mm"].get<double>() == doctest::Approx(3.3858).epsilon(1e-4));
    CHECK(j["eps_re"].get<double>() == doctest::Approx(2.039).epsilon(1e-3));

    const auto csv = run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "0.294", "--format", "csv"});
    REQUIRE(csv.code == 0);
    const auto rows = lines(csv.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "W_P_mm,L_P_mm,dL_mm,eps_re,freq_ghz,eps_r,h_mm");

    const auto solved = run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--solve-h", "--target-eps-re", "2.039"});
    REQUIRE(solved.code == 0);
    const auto s = nlohmann::json::parse(solved.out);
    CHECK(s["inputs"]["h_mm"].get<double>() == doctest::Approx(0.29388).epsilon(1e-4));
    CHECK(s["eps_re"].get<double>() == doctest::Approx(2.039).epsilon(1e-12));

    CHECK(run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--solve-h", "--target-eps-re", "2.5"}).code == 2);
    CHECK(run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "5"}).code == 2);
}

TEST_CASE("config and flags are exclusive") {
    const auto r = run({"uca-design", "--config", fixture("uca_design.json"), "--freq-ghz", "35"});
    CHECK(r.code == 2);
    const auto ok = run({"uca-design", "--config", fixture("uca_design.json")});
    REQUIRE(ok.code == 0);
    CHECK(ok.out == run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "0.294"}).out);
    CHECK(run({"capacity", "--config", fixture("capacity_bifocal_point.json"), "--steps", "5"}).code == 2);
}

TEST_CASE("fit-divergence") {
    const auto r = run({"fit-divergence"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["source"] == "builtin");
    REQUIRE(j["fits"].size() == 4);
    CHECK(j["fits"][0]["power_law"]["a"].get<double>() == doctest::Approx(147.0).epsilon(1e-2));

    const auto exact = run({"fit-divergence", "--table", fixture("exact_model.csv"), "--format", "csv"});
    REQUIRE(exact.code == 0);
    const auto rows = lines(exact.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "mode,a,b,power_rms_deg,p,q,rational_rms_deg");
    const auto ej = nlohmann::json::parse(run({"fit-divergence", "--table", fixture("exact_model.csv")}).out);
    CHECK(ej["fits"][0]["power_law"]["a"].get<double>() == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(ej["fits"][0]["power_law"]["b"].get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(ej["fits"][1]["power_law"]["b"].get<double>() == doctest::Approx(-1.05).epsilon(1e-6));
    CHECK(ej["fits"][2]["rational"]["p"].get<double>() == doctest::Approx(300.0).epsilon(1e-6));
    CHECK(ej["fits"][2]["rational"]["q"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(ej["fits"][3]["power_law"]["rms_deg"].get<double>() < 1e-8);

    CHECK(run({"fit-divergence", "--table", fixture("two_rows.csv")}).code == 2);
    CHECK(run({"fit-divergence", "--table", fixture("missing.csv")}).code == 2);
    CHECK(run({"fit-divergence", "--table", fixture("uca_design.json")}).code == 2);
}

TEST_CASE("lens-design") {
    const auto r = run({"lens-design", "--focal-mm", "30"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["diameter_mm"].get<double>() == doctest::Approx(50.1).epsilon(1e-9));
    CHECK(j["n"].get<double>() == doctest::Approx(1.48324).epsilon(1e-5));

    const auto csv = run({"lens-design", "--focal-mm", "30", "--samples", "64", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(lines(csv.out).size() == 65);

    const auto bif = run({"lens-design", "--config", fixture("lens_design.json")});
    REQUIRE(bif.code == 0);
    const auto b = nlohmann::json::parse(bif.out)["bifocal"];
    CHECK(b["f_i_mm"].get<double>() == doctest::Approx(65.0).epsilon(1e-2));
    CHECK(b["m_int"] == 27);
    CHECK(b["internal_center_thickness_mm"].get<double>() < b["single_focal_center_thickness_mm"].get<double>());

    CHECK(run({"lens-design"}).code == 2);
    CHECK(run({"lens-design", "--focal-mm", "30", "--theta-max-deg", "50"}).code == 2);
    CHECK(run({"lens-design", "--focal-mm", "-1"}).code == 2);
}

TEST_CASE("capacity") {
    const auto r = run({"capacity", "--config", fixture("capacity_divergent_distance.json")});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 201);
    CHECK(rows[0] == "x,capacity_bps");
    double prev = 1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double c = std::stod(rows[i].substr(rows[i].find(',') + 1));
        CHECK(c <= prev);
        prev = c;
    }

    const auto flags = run({"capacity", "--scenario", "bifocal", "--sweep", "distance", "--start-m", "0.05", "--stop-m",
                            "0.5", "--steps", "10", "--rho-target", "2.17", "--format", "json"});
    REQUIRE(flags.code == 0);
    const auto j = nlohmann::json::parse(flags.out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 10);

    CHECK(run({"capacity", "--scenario", "divergent", "--sweep", "focal", "--start-m", "0.01", "--stop-m", "0.04"}).code ==
          2);
    CHECK(run({"capacity", "--sweep", "distance", "--start-m", "0.01", "--stop-m", "0.04"}).code == 2);
    CHECK(run({"capacity", "--scenario", "converged", "--sweep", "distance", "--start-m", "0.01", "--stop-m", "0.04",
               "--modes", "1,9"})
              .code == 2);
}

TEST_CASE("malformed config exits 2") {
    const std::string path = std::string(OAM_BINARY_DIR) + "/malformed_config.json";
    {
        std::ofstream f(path);
        f << "{\"scenario\": \"bifocal\", ";
    }
    CHECK(run({"capacity", "--config", path}).code == 2);
    CHECK(run({"uca-design", "--config", path}).code == 2);
    {
        std::ofstream f(path);
        f << "{\"freq_ghz\": 35, \"colour\": 1}";
    }
    CHECK(run({"uca-design", "--config", path}).code == 2);
    std::remove(path.c_str());
}

TEST_CASE("--out writes the report to a file") {
    const std::string path = std::string(OAM_BINARY_DIR) + "/cli_out_test.json";
    const auto r = run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "0.294", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::ostringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str() == run({"uca-design", "--freq-ghz", "35", "--eps-r", "2.2", "--h-mm", "0.294"}).out);
    std::remove(path.c_str());
}
