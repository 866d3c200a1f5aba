#include <catch2/catch_amalgamated.hpp>

#include "qglevy/driver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qglevy;

namespace {

const char* kExampleConfig = R"cfg(
# example: U_q(su(2)) at q = 4; omega = sqrt(0.45) |+> keeps the jump rate
# modest so every discretization study stays inside its tolerance band
[algebra]
name = A1
q = 4

[representation]
spins = [(0.5, 1)]

[omega]
block_1 = [(0.6708203932499369, 0), (0, 0)]

[run]
t_max = 1.0
dt = 0.125
samples = 2000
seed = 7
tol = 1e-10
n_paths = 2
t_list = [0.5, 1.0]
mu_list = [[0], [1], [-1]]
)cfg";

ModelConfig example_config() {
    std::stringstream ss(kExampleConfig);
    return parse_config(ss);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("qglevy_test_" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing and validation") {
    ModelConfig cfg = example_config();
    REQUIRE(cfg.algebra_name == "A1");
    REQUIRE(cfg.q == 4.0);
    REQUIRE(cfg.spins == std::vector<std::pair<int, int>>{{1, 1}});
    REQUIRE(cfg.omega_blocks.size() == 1);
    REQUIRE(cfg.omega_blocks[0].size() == 2);
    REQUIRE(cfg.t_list == std::vector<double>{0.5, 1.0});
    REQUIRE(cfg.mu_list.size() == 3);
    REQUIRE(cfg.samples == 2000);

    // q = 1 is rejected with the documented message
    std::string broken(kExampleConfig);
    broken.replace(broken.find("q = 4"), 5, "q = 1");
    std::stringstream ss(broken);
    REQUIRE_THROWS_WITH(parse_config(ss), Catch::Matchers::ContainsSubstring("q must satisfy"));

    // both model kinds at once are rejected
    std::string both(kExampleConfig);
    both += "\n[classical]\nlambdas = [[1]]\nrates = [1.0]\n";
    std::stringstream ss2(both);
    REQUIRE_THROWS_AS(parse_config(ss2), ConfigError);

    // classical-only configs work
    std::stringstream ss3(R"cfg(
[algebra]
name = A1
q = 4
[classical]
lambdas = [[1], [-1]]
rates = [0.5, 0.5]
[run]
samples = 1500
)cfg");
    ModelConfig classical = parse_config(ss3);
    REQUIRE(classical.has_classical());
    REQUIRE(!classical.has_representation());
}

TEST_CASE("config print-parse round trip") {
    ModelConfig cfg = example_config();
    std::stringstream ss(print_config(cfg));
    ModelConfig back = parse_config(ss);
    REQUIRE(back == cfg);

    std::stringstream ss2(R"cfg(
[algebra]
matrix = [[2, -1], [-2, 2]]
symmetrizers = [2, 1]
q = 2
[classical]
lambdas = [[1, 0], [0, -1]]
rates = [0.25, 0.75]
[run]
mu_list = [[1, 0], [0, 1]]
)cfg");
    ModelConfig explicit_cfg = parse_config(ss2);
    std::stringstream ss3(print_config(explicit_cfg));
    REQUIRE(parse_config(ss3) == explicit_cfg);
}

TEST_CASE("bundle building checks dimensions") {
    ModelConfig cfg = example_config();
    cfg.omega_blocks[0].push_back({0.0, 0.0});
    REQUIRE_THROWS_AS(build_bundle(cfg), ConfigError);

    ModelConfig good = example_config();
    ModelBundle b = build_bundle(good);
    REQUIRE(b.triple.has_value());
    REQUIRE(b.model.has_value());
    REQUIRE(b.model->lambdas == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("cmd_check passes on the example model") {
    TempDir dir("check");
    REQUIRE(cmd_check(example_config(), dir.path.string()) == 0);
    std::string report = slurp(dir.path / "check_report.csv");
    REQUIRE(report.find("check,quantity,value,tolerance,pass") == 0);
    REQUIRE(report.find("status=pass") != std::string::npos);
}

TEST_CASE("cmd_check fails with a named relation on a tampered rep file") {
    TempDir dir("check_bad");
    // write a representation file with a broken involution
    Rep rep(CartanData::named("A1", 4.0), {{su2_irrep(1, 4.0), 1}});
    std::stringstream rep_text;
    save_rep(rep, rep_text);
    std::string text = rep_text.str();
    auto at = text.find("matrix f_1 = ");
    text.replace(text.find("[1,0]", at), 5, "[1.5,0]");
    auto rep_path = dir.path / "bad.rep";
    std::ofstream(rep_path) << text;

    ModelConfig cfg = example_config();
    cfg.spins.clear();
    cfg.rep_file = rep_path.string();
    REQUIRE(cmd_check(cfg, dir.path.string()) == 1);
    std::string report = slurp(dir.path / "check_report.csv");
    REQUIRE(report.find("involution") != std::string::npos);
    REQUIRE(report.find("status=fail") != std::string::npos);
}

TEST_CASE("cmd_moments writes a consistent table") {
    TempDir dir("moments");
    ModelConfig cfg = example_config();
    REQUIRE(cmd_moments(cfg, dir.path.string()) == 0);
    std::string table = slurp(dir.path / "moments.csv");
    REQUIRE(table.find("mu,t,exact,series,fock,mc_mean,mc_stderr") == 0);
    REQUIRE(table.find("status=pass") != std::string::npos);
    // mu = 0 rows evaluate to 1 in every engine column
    REQUIRE(table.find("[0],0.5,1,1,1,1,0") != std::string::npos);

    // byte-identical reruns under the same seed
    TempDir dir2("moments2");
    REQUIRE(cmd_moments(cfg, dir2.path.string()) == 0);
    REQUIRE(slurp(dir2.path / "moments.csv") == table);
}

TEST_CASE("cmd_simulate writes trajectories and an mc report") {
    TempDir dir("simulate");
    ModelConfig cfg = example_config();
    REQUIRE(cmd_simulate(cfg, dir.path.string()) == 0);
    REQUIRE(std::filesystem::exists(dir.path / "trajectory_0.csv"));
    REQUIRE(std::filesystem::exists(dir.path / "trajectory_1.csv"));
    std::string traj = slurp(dir.path / "trajectory_0.csv");
    REQUIRE(traj.find("t_jump,lambda_1") == 0);
    REQUIRE(traj.find("status=pass") != std::string::npos);
    std::string mc = slurp(dir.path / "mc_report.csv");
    REQUIRE(mc.find("status=pass") != std::string::npos);

    // classical-only configs run without any representation machinery
    TempDir dir3("simulate_classical");
    std::stringstream ss(R"cfg(
[algebra]
name = A1
q = 4
[classical]
lambdas = [[1]]
rates = [1.0]
[run]
samples = 2000
seed = 5
n_paths = 1
)cfg");
    REQUIRE(cmd_simulate(parse_config(ss), dir3.path.string()) == 0);

    // deterministic outputs
    TempDir dir2("simulate2");
    REQUIRE(cmd_simulate(cfg, dir2.path.string()) == 0);
    REQUIRE(slurp(dir2.path / "trajectory_0.csv") == traj);
}

TEST_CASE("cmd_fock and cmd_compare run the discretization studies") {
    TempDir dir("fock");
    ModelConfig cfg = example_config();
    cfg.dt = 1.0 / 16.0;
    REQUIRE(cmd_fock(cfg, dir.path.string()) == 0);
    std::string report = slurp(dir.path / "fock_report.csv");
    REQUIRE(report.find("halving_ratio") != std::string::npos);
    REQUIRE(report.find("status=pass") != std::string::npos);

    cfg.dt = 1.0 / 32.0;
    cfg.samples = 20000;
    REQUIRE(cmd_compare(cfg, dir.path.string()) == 0);
    std::string cmp = slurp(dir.path / "compare_report.csv");
    REQUIRE(cmp.find("corollary_bridge") != std::string::npos);
    REQUIRE(cmp.find("status=pass") != std::string::npos);

    // classical-only config cannot drive the fock engines
    std::stringstream ss(R"cfg(
[algebra]
name = A1
q = 4
[classical]
lambdas = [[1]]
rates = [1.0]
)cfg");
    ModelConfig classical = parse_config(ss);
    REQUIRE_THROWS_AS(cmd_fock(classical, dir.path.string()), ConfigError);
    REQUIRE_THROWS_AS(cmd_compare(classical, dir.path.string()), ConfigError);
}
