#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "hamsys/io.hpp"

using namespace hamsys;

TEST_CASE("config text parses sections and dotted keys alike") {
    const char* sectioned = R"(
[problem]
p = 2
q = 3
[domain]
kind = disk
radius = 1.5
[solver]
modes = 48
frameworks = dual, shooting
)";
    RunConfig a = parse_config_text(sectioned, "test");
    RunConfig b = parse_config_text(
        "problem.p = 2\nproblem.q = 3\ndomain.kind = disk\n"
        "domain.radius = 1.5\nsolver.modes = 48\nsolver.frameworks = dual, shooting\n",
        "test");
    CHECK(config_echo(a) == config_echo(b));
    CHECK(a.problem.p == 2.0);
    CHECK(a.dom.kind == Domain::Kind::Disk);
    CHECK(a.dom.R == 1.5);
    CHECK(a.problem.N == 2);
    CHECK(a.modes == 48);
    REQUIRE(a.frameworks.size() == 2);
    CHECK(a.frameworks[0] == Framework::Dual);
    CHECK(a.frameworks[1] == Framework::ShootingOracle);
}

TEST_CASE("config echo round-trips to an identical config") {
    RunConfig cfg;
    cfg.problem = {2.5, 3.5, 1.0, 0.5, 2};
    cfg.dom = Domain::disk(1.0 / 3.0);
    cfg.modes = 40;
    cfg.solver.seed = 1234567890123ull;
    cfg.lambdas = {0.5, 1.0, 2.0};
    std::string echo = config_echo(cfg);
    RunConfig back = parse_config_text(echo, "echo");
    CHECK(config_echo(back) == echo);
    CHECK(back.problem.p == cfg.problem.p);
    CHECK(back.solver.seed == cfg.solver.seed);
    CHECK(back.lambdas == cfg.lambdas);
}

TEST_CASE("parse errors carry origin, line and field diagnostics") {
    CHECK_THROWS_WITH_AS(parse_config_text("problem.p = x\n", "cfg.ini"),
                         doctest::Contains("cfg.ini:1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("nosuch.key = 1\n", "cfg.ini"),
                         doctest::Contains("unknown field"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("problem.p = 2\nproblem.p = 3\n", "cfg.ini"),
                         doctest::Contains("set twice"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("domain.kind = cube\n", "cfg.ini"),
                         doctest::Contains("unknown domain"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("problem.p\n", "cfg.ini"),
                         doctest::Contains("key = value"), std::runtime_error);
    CHECK_THROWS(parse_config_file("/nonexistent/path.ini"));
}

TEST_CASE("comments and blank lines are ignored") {
    RunConfig cfg = parse_config_text(
        "# leading comment\n\nproblem.p = 4 # trailing\n; semicolon comment\n", "t");
    CHECK(cfg.problem.p == 4.0);
}

TEST_CASE("full-precision formatting round-trips doubles exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ud(-1e6, 1e6);
    for (int k = 0; k < 200; k++) {
        double x = ud(rng) * std::pow(10.0, int(rng() % 17) - 8);
        CHECK(std::stod(fmt_full(x)) == x);
    }
    CHECK(fmt_human(1.0 / 3.0) == "0.333333");
}

TEST_CASE("framework names parse and reject") {
    CHECK(parse_framework("dual") == Framework::Dual);
    CHECK(parse_framework("inversion") == Framework::Inversion);
    CHECK(parse_framework("ls_reduction") == Framework::LSReduction);
    CHECK(parse_framework("shooting") == Framework::ShootingOracle);
    CHECK_THROWS(parse_framework("fem"));
}

TEST_CASE("field persistence round-trips coefficients at full precision") {
    auto b = Basis::build(Domain::disk(1.0), 20);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    Eigen::VectorXd c(20);
    for (int n = 0; n < 20; n++) c[n] = nd(rng);
    Field f = Field::from_coeff(b, c);
    std::string stem = "/tmp/hamsys_test_field";
    save_field(f, stem);
    Field g = load_field(stem);
    REQUIRE(g.valid());
    CHECK(g.basis()->domain.same(b->domain));
    CHECK((g.coeff() - c).norm() == 0.0);
    std::remove((stem + ".csv").c_str());
    std::remove((stem + ".json").c_str());
}

TEST_CASE("trace and sweep tables are written with stable headers") {
    std::vector<TraceRow> tr = {{0, -1.0, 0.5, 0.1}, {1, -1.1, 0.05, 0.2}};
    save_trace(tr, "/tmp/hamsys_test_trace.csv");
    std::vector<SweepRow> sw = {{0.0, 0.0, 39.6, 39.6, false, 1e-9}};
    save_sweep(sw, "/tmp/hamsys_test_sweep.csv");
    auto slurp = [](const char* p) {
        FILE* f = std::fopen(p, "rb");
        REQUIRE(f);
        char buf[4096];
        size_t n = std::fread(buf, 1, sizeof buf - 1, f);
        std::fclose(f);
        std::remove(p);
        return std::string(buf, n);
    };
    std::string t = slurp("/tmp/hamsys_test_trace.csv");
    CHECK(t.rfind("iter,energy,residual,step\n", 0) == 0);
    std::string s = slurp("/tmp/hamsys_test_sweep.csv");
    CHECK(s.rfind("alpha,beta,c_rad,c_full,breaking_flag,foliated_deficit\n", 0) == 0);
}

TEST_CASE("json serializers expose the expected keys") {
    Classification cl = classify({3.0, 3.0, 0.0, 0.0, 2});
    nlohmann::json j = classification_json(cl);
    CHECK(j.contains("regime"));
    CHECK(j.contains("hyperbola"));
    CHECK(j["H3"] == true);
    RunConfig cfg;
    nlohmann::json jc = config_json(cfg);
    CHECK(jc.contains("ini"));
    CHECK(jc["ini"].get<std::string>() == config_echo(cfg));
}
