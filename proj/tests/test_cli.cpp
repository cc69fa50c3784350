#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdrelay/cli.hpp"
#include "bdrelay/discrete_capacity.hpp"
#include "bdrelay/fading_montecarlo.hpp"
#include "bdrelay/lp_optimizer.hpp"
#include "bdrelay/region_io.hpp"
#include "discrete_fixtures.hpp"

using namespace bdrelay;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "bdrelay");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::vector<std::string> kFigGains{"--p-db", "10", "--g-ar-db", "0", "--g-br-db", "5", "--g-ab-db", "-7"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("bdrelay_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("region matches the library")
{
    auto r = run({"region", "--protocol", "mabc", "--bound", "inner", "--p-db", "0", "--g-ar-db", "0", "--g-br-db", "0",
                  "--g-ab-db", "-100", "--delta", "0.5,0.5"});
    REQUIRE(r.code == 0);
    const auto t = gaussian_mi_table(ChannelGains::from_db(-100, 0, 0, 0), Protocol::MABC);
    const auto lib = fixed_delta_region(Protocol::MABC, BoundKind::Inner, t, PhaseSchedule(Protocol::MABC, {0.5, 0.5}));
    CHECK(r.out == region_to_csv(lib));
    CHECK(r.out.rfind("r_a,r_b\n0,0\n0.5,0\n0.5,0.29248125036057", 0) == 0);

    r = run(with({"region", "--protocol", "hbc"}, kFigGains));
    REQUIRE(r.code == 0);
    const auto h = gaussian_mi_table(ChannelGains::from_db(-7, 0, 5, 10), Protocol::HBC);
    CHECK(r.out == region_to_csv(optimized_region(Protocol::HBC, BoundKind::Inner, h)));

    r = run(with({"region", "--protocol", "tdbc", "--bound", "outer", "--format", "json", "--mu-grid", "11"}, kFigGains));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto tt = gaussian_mi_table(ChannelGains::from_db(-7, 0, 5, 10), Protocol::TDBC);
    CHECK(j["vertices"] == region_to_json(optimized_region(Protocol::TDBC, BoundKind::Outer, tt, 11)));
    CHECK(j["metadata"]["tool"] == "bdrelay");
    CHECK(j["metadata"]["version"] == std::string(kToolVersion));
    CHECK(j["metadata"]["parameters"]["mu_grid"] == 11);
    CHECK(j["metadata"]["parameters"]["g_ab_db"] == -7.0);
}

TEST_CASE("optimize matches the library")
{
    const auto r = run(with({"optimize", "--protocol", "hbc", "--mu", "0.3"}, kFigGains));
    REQUIRE(r.code == 0);
    const auto h = gaussian_mi_table(ChannelGains::from_db(-7, 0, 5, 10), Protocol::HBC);
    const auto o = optimize_schedule(Protocol::HBC, BoundKind::Inner, h, 0.3);
    std::string expect = "protocol,bound,mu,value,r_a,r_b,delta_1,delta_2,delta_3,delta_4\nhbc,inner,0.29999999999999999," +
                         format_double(o.value) + "," + format_double(o.rates.r_a) + "," + format_double(o.rates.r_b);
    for (double d : o.schedule.durations()) expect += "," + format_double(d);
    CHECK(r.out == expect + "\n");
}

TEST_CASE("sweep matches the library")
{
    const auto r = run({"sweep", "--sweep", "g_ab_db", "--start", "-20", "--stop", "0", "--step", "5", "--protocols",
                        "mabc,tdbc,hbc", "--p-db", "15", "--g-ar-db", "0", "--g-br-db", "5"});
    REQUIRE(r.code == 0);
    SweepSpec s;
    s.swept = SweepParameter::GAbDb;
    s.start = -20;
    s.stop = 0;
    s.step = 5;
    s.p_db = 15;
    s.g_ar_db = 0;
    s.g_br_db = 5;
    CHECK(r.out == sweep_to_csv(sweep_sum_rate(s, {Protocol::MABC, Protocol::TDBC, Protocol::HBC}, BoundKind::Inner)));

    const auto missing = run({"sweep", "--sweep", "p_db", "--start", "0", "--stop", "1", "--step", "1", "--g-ar-db", "0",
                              "--g-ab-db", "0"});
    CHECK(missing.code == kExitUsage);
    CHECK(missing.err.find("g_br_db") != std::string::npos);

    const auto zero_step = run({"sweep", "--sweep", "p_db", "--start", "0", "--stop", "1", "--step", "0", "--g-ar-db",
                                "0", "--g-ab-db", "0", "--g-br-db", "0"});
    CHECK(zero_step.code == kExitUsage);
    CHECK(zero_step.err.find("step") != std::string::npos);
}

TEST_CASE("compare reports a witness")
{
    const auto r = run(with({"compare", "--a", "hbc:inner", "--b", "tdbc:outer"}, kFigGains));
    REQUIRE(r.code == 0);
    const auto g = ChannelGains::from_db(-7, 0, 5, 10);
    const auto a = optimized_region(Protocol::HBC, BoundKind::Inner, gaussian_mi_table(g, Protocol::HBC));
    const auto b = optimized_region(Protocol::TDBC, BoundKind::Outer, gaussian_mi_table(g, Protocol::TDBC));
    const auto w = exists_point_outside(a, b);
    REQUIRE(w.has_value());
    CHECK(r.out == "result,r_a,r_b\nwitness," + format_double(w->r_a) + "," + format_double(w->r_b) + "\n");

    const auto c = run(with({"compare", "--a", "mabc", "--b", "hbc", "--format", "json"}, kFigGains));
    REQUIRE(c.code == 0);
    const auto j = nlohmann::json::parse(c.out);
    CHECK(j["contained"] == true);
    CHECK(j["witness"].is_null());

    const auto fixed = run(with({"compare", "--a", "mabc", "--delta-a", "0.5,0.5", "--b", "mabc"}, kFigGains));
    REQUIRE(fixed.code == 0);
    CHECK(fixed.out == "result,r_a,r_b\ncontained,,\n");

    const auto bad = run(with({"compare", "--a", "hbc:tight", "--b", "mabc"}, kFigGains));
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("a:") != std::string::npos);
}

TEST_CASE("discrete matches the library")
{
    const auto path = temp_path("channel.json");
    {
        std::ofstream f(path);
        f << fixtures::binary_adder().to_json().dump();
    }
    const auto r = run({"discrete", "--channel", path.string(), "--delta", "0.5,0.5", "--k", "6"});
    REQUIRE(r.code == 0);
    CHECK(r.out == region_to_csv(mabc_capacity_region(fixtures::binary_adder(), PhaseSchedule(Protocol::MABC, {0.5, 0.5}),
                                                      InputGrid(6))));
    {
        std::ofstream f(path);
        f << "{not json";
    }
    const auto broken = run({"discrete", "--channel", path.string(), "--delta", "0.5,0.5"});
    CHECK(broken.code == kExitUsage);
    CHECK(broken.err.find("channel") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("mc matches the library")
{
    const auto r = run({"mc", "--p-db", "10", "--samples", "50", "--seed", "3", "--protocols", "mabc,hbc"});
    REQUIRE(r.code == 0);
    FadingConfig c;
    c.power = db_to_linear(10);
    c.samples = 50;
    c.seed = 3;
    const auto res = montecarlo_expected_rates(c, {Protocol::MABC, Protocol::HBC});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["stats"] == montecarlo_to_json(c, res)["stats"]);
    CHECK(j["seed"] == 3);
    CHECK(j["samples"] == 50);
    CHECK(j["metadata"]["command"] == "mc");

    const auto csv = run({"mc", "--p-db", "10", "--samples", "50", "--seed", "3", "--protocols", "hbc", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out == "protocol,mean,std_error\nhbc," + format_double(res.stats.at(Protocol::HBC).mean) + "," +
                         format_double(res.stats.at(Protocol::HBC).std_error) + "\n");
}

TEST_CASE("repeated runs are byte identical")
{
    const std::vector<std::string> sweep{"sweep", "--sweep", "p_db", "--start", "0", "--stop", "20", "--step", "2",
                                         "--g-ab-db", "-7", "--g-ar-db", "0", "--g-br-db", "5", "--format", "json"};
    CHECK(run(sweep).out == run(sweep).out);
    const std::vector<std::string> mc{"mc", "--p-db", "5", "--samples", "200", "--seed", "11"};
    CHECK(run(mc).out == run(mc).out);
}

TEST_CASE("output files are written in place")
{
    const auto path = temp_path("region.csv");
    const auto r = run(with({"region", "--protocol", "dt", "--delta", "0.5,0.5", "-o", path.string()}, kFigGains));
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().rfind("r_a,r_b\n", 0) == 0);
    std::filesystem::remove(path);
    for (const auto& e : std::filesystem::directory_iterator(path.parent_path()))
        CHECK(e.path().filename().string().find(path.filename().string() + ".tmp") == std::string::npos);
}

TEST_CASE("exit codes")
{
    auto r = run(with({"region", "--protocol", "hbc", "--bound", "outer"}, kFigGains));
    CHECK(r.code == kExitCompute);
    CHECK(r.err.find("hbc outer") != std::string::npos);

    r = run(with({"region", "--protocol", "dt", "--bound", "outer"}, kFigGains));
    CHECK(r.code == kExitCompute);

    r = run(with({"region", "--protocol", "hbc", "--frobnicate"}, kFigGains));
    CHECK(r.code == kExitUsage);

    r = run({"region", "--protocol", "hbc"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("--p-db") != std::string::npos);

    r = run({});
    CHECK(r.code == kExitUsage);

    r = run(with({"region", "--protocol", "mabc", "--delta", "0.5,0.6"}, kFigGains));
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("delta") != std::string::npos);

    r = run(with({"region", "--protocol", "mabc", "--delta", "0.2,0.3,0.5"}, kFigGains));
    CHECK(r.code == kExitUsage);

    r = run(with({"region", "--protocol", "xyz"}, kFigGains));
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("protocol") != std::string::npos);

    r = run({"mc", "--p-db", "0", "--samples", "0"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("samples") != std::string::npos);

    r = run(with({"region", "--protocol", "dt", "--format", "xml"}, kFigGains));
    CHECK(r.code == kExitUsage);
}

TEST_CASE("help lists every flag")
{
    const std::vector<std::pair<std::string, std::vector<std::string>>> cmds{
        {"region", {"--protocol", "--bound", "--delta", "--mu-grid", "--p-db", "--g-ab-db", "--g-ar-db", "--g-br-db",
                    "--format", "--output"}},
        {"optimize", {"--protocol", "--bound", "--mu", "--p-db", "--format", "--output"}},
        {"sweep", {"--sweep", "--start", "--stop", "--step", "--protocols", "--bound", "--p-db", "--g-br-db"}},
        {"compare", {"--a", "--b", "--delta-a", "--delta-b", "--mu-grid", "--tol", "--g-ab-db"}},
        {"discrete", {"--channel", "--delta", "--k", "--format"}},
        {"mc", {"--alpha", "--d-ab", "--d-ar", "--d-br", "--model", "--p-db", "--samples", "--seed", "--protocols"}},
    };
    for (const auto& [cmd, flags] : cmds) {
        const auto r = run({cmd, "--help"});
        CHECK(r.code == 0);
        for (const auto& f : flags) {
            INFO(cmd << " " << f);
            CHECK(r.out.find(f) != std::string::npos);
        }
    }
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* c : {"region", "optimize", "sweep", "compare", "discrete", "mc"}) CHECK(top.out.find(c) != std::string::npos);
    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == std::string(kToolVersion) + "\n");
}
