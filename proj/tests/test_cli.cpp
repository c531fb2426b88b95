#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "wbd/field_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + WBD_CLI_PATH + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("wbd_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path / name;
        std::ofstream(p) << text;
        return p.string();
    }
};

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("symbol-check") {
    const auto all = cli("symbol-check");
    CHECK(all.code == 0);
    CHECK(count_lines(all.out) == 1 + 2 * 13);
    const auto one = cli("symbol-check --quantity m_prime --beta 0");
    CHECK(one.code == 0);
    CHECK(count_lines(one.out) == 2);
    CHECK(one.out.rfind("beta,quantity,order,kind,ratio_min,ratio_max,spread,envelope,pass\n0,m_prime,0,", 0) == 0);
    TempDir tmp;
    CHECK(cli("symbol-check -c " + tmp.write("bad.json", "{\"beta\": [0")).code == 2);
    CHECK(cli("symbol-check -c " + tmp.write("typo.json", "{\"betas\": [0]}")).code == 2);
    CHECK(cli("symbol-check --quantity nope").code == 2);
    CHECK(cli("symbol-check --beta 3").code == 2);
    CHECK(cli("").code == 2);
}

TEST_CASE("dry run prints the resolved config") {
    for (const char* sub : {"symbol-check", "kernel-decay", "strichartz", "bilinear", "solve"}) {
        const auto r = cli(std::string(sub) + " --dry-run");
        CHECK(r.code == 0);
        CHECK(nlohmann::json::parse(r.out).is_object());
    }
    TempDir tmp;
    const auto r = cli("solve --dry-run -c " + tmp.write("c.json", "{\"dt\": 0.5, \"grid\": {\"n\": 64}}"));
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["dt"] == 0.5);
    CHECK(j["grid"]["n"] == 64);
    CHECK(j["grid"]["d"] == 1);
}

TEST_CASE("kernel-decay") {
    TempDir tmp;
    CHECK(cli("kernel-decay -c " + tmp.write("e.json", "{\"lambda_list\": []}")).code == 2);
    CHECK(cli("kernel-decay -c " + tmp.write("l.json", "{\"lambda_list\": [3]}")).code == 2);
    const std::string out = (tmp.path / "decay.csv").string();
    const auto r = cli("kernel-decay --emit-plot-table -o " + out + " -c " +
                       tmp.write("k.json", "{\"lambda_list\": [1], \"decade\": {\"points\": 8}}"));
    CHECK(r.code == 0);
    std::ifstream in(out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "d,beta,lambda,t,sup,normalized_sup,slope");
    int rows = 0;
    double slope = 0.0;
    while (std::getline(in, row)) {
        ++rows;
        slope = std::stod(row.substr(row.rfind(',') + 1));
    }
    CHECK(rows == 8);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(fs::exists(tmp.path / "decay_plot.csv"));
    // An impossible tolerance turns the same run into a violation.
    CHECK(cli("kernel-decay -c " +
              tmp.write("t.json", "{\"lambda_list\": [1], \"decade\": {\"points\": 8}, \"slope_tolerance\": 1e-9}"))
              .code == 1);
}

TEST_CASE("strichartz and bilinear") {
    TempDir tmp;
    const auto r = cli("strichartz -c " + tmp.write("s.json", "{\"samples\": 10, \"lambda_list\": [1]}"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("d,beta,lambda,q,r,T,ratio,n_samples\n2,0,1,4,4,1,", 0) == 0);
    CHECK(cli("strichartz -c " + tmp.write("n.json", "{\"q\": 4, \"r\": 5}")).code == 2);
    CHECK(cli("strichartz -c " + tmp.write("f.json", "{\"d\": 1, \"q\": \"8\", \"r\": 4, \"samples\": 5}")).code ==
          0);
    const auto b = cli("bilinear -c " + tmp.write("b.json", "{\"samples\": 3}"));
    CHECK(b.code == 0);
    CHECK(b.out.find("2,0,1;1;1,4,4,1,") != std::string::npos);
    const auto v = cli("bilinear -c " + tmp.write("v.json", "{\"samples\": 3, \"lambdas\": [8, 1, 1]}"));
    CHECK(v.code == 0);
    CHECK(count_lines(v.out) == 2);
}

TEST_CASE("solve") {
    TempDir tmp;
    const auto zero = cli("solve -c " + tmp.write("z.json", "{\"data\": {\"name\": \"zero\"}, \"T\": 0.2}"));
    CHECK(zero.code == 0);
    CHECK(zero.out == "t,Hs_eta,Hs_v,tail_mass,curl_defect,reality_defect\n0,0,0,0,0,0\n0.1,0,0,0,0,0\n0.2,0,0,0,0,0\n");

    const std::string frames = (tmp.path / "frames").string();
    const std::string cfg = tmp.write(
        "r.json", "{\"grid\": {\"d\": 2, \"n\": 32}, \"data\": {\"name\": \"random\", \"amplitude\": 0.3, \"seed\": 4}, "
                  "\"T\": 0.5, \"frame_every\": 25, \"frames_dir\": \"" + frames + "\"}");
    const auto a = cli("solve --workers 1 -c " + cfg);
    const auto b = cli("solve -c " + cfg, "WBD_WORKERS=3");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(count_lines(a.out) == 4);
    const auto f = wbd::io::load((fs::path(frames) / "frame_00002.wbdf").string());
    CHECK(f.components() == 3);
    CHECK(f.grid().n() == 32);

    // Restart from a saved frame.
    const std::string restart = tmp.write(
        "re.json", "{\"grid\": {\"d\": 2, \"n\": 32}, \"data\": {\"name\": \"file\", \"path\": \"" + frames +
                       "/frame_00000.wbdf\"}, \"T\": 0.5, \"frame_every\": 25}");
    // Reconstruction round-off only touches the curl and reality columns.
    auto leading = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) {
            std::size_t pos = 0;
            for (int i = 0; i < 4; ++i) pos = line.find(',', pos) + 1;
            out += line.substr(0, pos) + "\n";
        }
        return out;
    };
    CHECK(leading(cli("solve -c " + restart).out) == leading(a.out));

    const auto scan = cli("solve -c " + tmp.write("d.json", "{\"data\": {\"name\": \"packet\", \"amplitude\": 1}, "
                                                            "\"T\": 4, \"d0_scan\": {\"values\": [2, 50]}}"));
    CHECK(scan.code == 0);
    CHECK(scan.out.rfind("D0,validity_horizon\n2,none\n50,", 0) == 0);
    CHECK(cli("solve -c " + tmp.write("x.json", "{\"integrator\": \"euler\"}")).code == 2);
    CHECK(cli("solve -c " + tmp.write("y.json", "{\"dt\": -1}")).code == 2);
}

}
