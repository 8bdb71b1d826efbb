#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hqn/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = hqn::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hqn_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string& header) {
    std::ifstream f(p);
    std::getline(f, header);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("curve export") {
        const fs::path dir = scratch("curve");
        const std::string file = (dir / "c.csv").string();
        const Run r = cli({"curve", "--case", "elliptic", "--n", "2", "--m", "1", "--a", "1.0", "--smax", "20", "--tol",
                           "1e-10", "--out", file});
        REQUIRE(r.code == 0);
        std::string header;
        const auto rows = read_csv(file, header);
        CHECK(header == "s,c1,c2,sigma,V,I1,I2,residual");
        REQUIRE(rows.size() == 2001);
        for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][1] > rows[k - 1][1]);
        CHECK(rows.back()[0] == doctest::Approx(20.0));
    }

    TEST_CASE("identical configurations give identical bytes") {
        const fs::path dir = scratch("determinism");
        for (const char* name : {"a.csv", "b.csv"})
            REQUIRE(cli({"curve", "--case", "parabolic", "--a", "0.7", "--smax", "10", "--out", (dir / name).string()})
                        .code == 0);
        const std::string a = slurp(dir / "a.csv");
        CHECK(!a.empty());
        CHECK(a == slurp(dir / "b.csv"));
        REQUIRE(cli({"family", "--case", "special-loxodromic", "--agrid=-0.5,0,0.5", "--smax", "5", "--out",
                     (dir / "f1").string()})
                    .code == 0);
        REQUIRE(cli({"family", "--case", "special-loxodromic", "--agrid=-0.5,0,0.5", "--smax", "5", "--out",
                     (dir / "f2").string()})
                    .code == 0);
        for (const char* name : {"curve_000.csv", "curve_001.csv", "curve_002.csv", "manifest.json"})
            CHECK(slurp(dir / "f1" / name) == slurp(dir / "f2" / name));
    }

    TEST_CASE("family with certificate") {
        const fs::path dir = scratch("family");
        const Run r = cli({"family", "--case", "parabolic", "--agrid", "0.5,1,2", "--qgrid", "0.5,1,2,4", "--smax", "40",
                           "--out", dir.string()});
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
        CHECK(j["curves"].size() == 3);
        CHECK(j["certificate"]["pass"] == true);
        CHECK(j["certificate"]["crossings"].size() == 12);
    }

    TEST_CASE("integral") {
        const Run r = cli({"integral", "--n", "2"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("0.1471", 0) == 0);
    }

    TEST_CASE("verify report") {
        const Run r = cli({"verify", "--suite", "all", "--n", "2"});
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["pass"] == true);
        CHECK(j["checks"].size() > 50);
        for (const auto& c : j["checks"]) {
            CHECK(c.contains("name"));
            CHECK(c.contains("value"));
            CHECK(c.contains("bound"));
            CHECK(c.contains("pass"));
        }
        const Run csv = cli({"verify", "--suite", "explicit", "--format", "csv"});
        CHECK(csv.code == 0);
        CHECK(csv.out.rfind("suite,name,value,bound,relation,pass\n", 0) == 0);
    }

    TEST_CASE("oracle and boundary reports") {
        Run r = cli({"oracle", "--kind", "volume", "--case", "special-loxodromic"});
        CHECK(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["pass"] == true);
        r = cli({"oracle", "--kind", "mean-curvature", "--surface", "horosphere"});
        CHECK(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["target"] == 5.0);
        r = cli({"boundary", "--case", "parabolic", "--a", "1", "--smax", "40"});
        CHECK(r.code == 0);
        const double rho = nlohmann::json::parse(r.out)["limit"]["c2"];
        CHECK(rho == doctest::Approx(0.6003).epsilon(1e-3));
        r = cli({"boundary", "--case", "special-parabolic", "--tol", "1e-11"});
        CHECK(r.code == 0);
        r = cli({"boundary", "--case", "special-parabolic", "--smax", "2"});
        CHECK(r.code == 1);
        r = cli({"oracle", "--kind", "mean-curvature", "--surface", "horosphere", "--bound", "1e-30"});
        CHECK(r.code == 1);
    }

    TEST_CASE("convert") {
        Run r = cli({"convert", "--from", "ball", "--to", "siegel", "--point=0,0,0,0,0,0,0,0"});
        CHECK(r.code == 0);
        CHECK(r.out == "0,0,0,0,0.5,0,0,0\n");
        r = cli({"convert", "--from", "horo", "--to", "horo", "--point=0,0,0,0,1,0,0,0", "--apply", "transvection:1"});
        CHECK(r.code == 0);
        std::stringstream ss(r.out);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 8);
        CHECK(v[4] == doctest::Approx(std::exp(2.0)));
        r = cli({"convert", "--from", "horo", "--to", "horo", "--point=0,0,0,0,4,0,0,0", "--apply", "inversion"});
        CHECK(r.out.find(",0.25,") != std::string::npos);
    }

    TEST_CASE("usage errors") {
        CHECK(cli({}).code == 2);
        CHECK(cli({"frobnicate"}).code == 2);
        CHECK(cli({"curve", "--case", "elliptic"}).code == 2);
        CHECK(cli({"curve", "--case", "elliptic", "--m", "3", "--a", "1"}).code == 2);
        CHECK(cli({"curve", "--case", "hyperbolic", "--a", "1"}).code == 2);
        CHECK(cli({"curve", "--case", "elliptic", "--a", "-1"}).code == 2);
        CHECK(cli({"curve", "--case", "elliptic", "--a", "1", "--tol", "0"}).code == 2);
        CHECK(cli({"curve", "--case", "elliptic", "--a", "abc"}).code == 2);
        CHECK(cli({"verify", "--suite", "nonsense"}).code == 2);
        CHECK(cli({"convert", "--point=1,0,0,0,0,0,0,0"}).code == 2);
        CHECK(cli({"convert", "--point=0,0,0"}).code == 2);
        CHECK(cli({"convert", "--point=0,0,0,0,0,0,0,0", "--apply", "warp:1"}).code == 2);
        CHECK(cli({"integral", "--n", "1"}).code == 2);
        CHECK(cli({"--help"}).code == 0);
    }
}
