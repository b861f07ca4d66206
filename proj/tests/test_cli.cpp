#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string cli_path() {
    const char* env = std::getenv("TSVHA_CLI");
    REQUIRE(env != nullptr);  // set by ctest; export TSVHA_CLI=<binary> for manual runs
    return env;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path out_path = fs::temp_directory_path() / "tsvha_cli_stdout.txt";
    const fs::path err_path = fs::temp_directory_path() / "tsvha_cli_stderr.txt";
    const std::string command =
        cli_path() + " " + args + " >" + out_path.string() + " 2>" + err_path.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

fs::path write_config(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

const std::string kSmallConfig =
    "[experiment]\n"
    "horizon = 50\n"
    "runs = 6\n"
    "seed = 321\n"
    "metrics = cumulative, per_period, final_distribution\n"
    "[env]\n"
    "family = random_uniform\n"
    "arms = 3\n"
    "noise = gaussian_unit\n"
    "[policy]\n"
    "kind = ts\n"
    "[policy]\n"
    "name = c1\n"
    "kind = tsvha\n"
    "combiner = c1\n"
    "agents = 2\n";

}  // namespace

TEST_CASE("run writes trace files and exits zero") {
    const fs::path config = write_config("tsvha_cli_run.cfg", kSmallConfig);
    const fs::path out_dir = fs::temp_directory_path() / "tsvha_cli_run_out";
    fs::remove_all(out_dir);
    const CliResult result = run_cli("run --config " + config.string() + " --out " + out_dir.string());
    INFO(result.err);
    REQUIRE(result.exit_code == 0);
    for (const std::string name : {"trace_ts.csv", "trace_c1.csv", "perperiod_ts.csv",
                                   "perperiod_c1.csv", "final_ts.csv", "final_c1.csv"}) {
        REQUIRE(fs::exists(out_dir / name));
    }
    const std::string trace = read_file(out_dir / "trace_ts.csv");
    REQUIRE(trace.rfind("t,mean,std,q10,q25,q50,q75,q90,runs\n", 0) == 0);
}

TEST_CASE("rerunning an identical config is byte-identical") {
    const fs::path config = write_config("tsvha_cli_det.cfg", kSmallConfig);
    const fs::path out_a = fs::temp_directory_path() / "tsvha_cli_det_a";
    const fs::path out_b = fs::temp_directory_path() / "tsvha_cli_det_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + out_a.string() +
                    " --workers 1").exit_code == 0);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + out_b.string() +
                    " --workers 2").exit_code == 0);
    for (const auto& entry : fs::directory_iterator(out_a)) {
        const fs::path other = out_b / entry.path().filename();
        REQUIRE(fs::exists(other));
        REQUIRE(read_file(entry.path()) == read_file(other));
    }
}

TEST_CASE("seed override changes the outputs") {
    const fs::path config = write_config("tsvha_cli_seed.cfg", kSmallConfig);
    const fs::path out_a = fs::temp_directory_path() / "tsvha_cli_seed_a";
    const fs::path out_b = fs::temp_directory_path() / "tsvha_cli_seed_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + out_a.string()).exit_code == 0);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + out_b.string() +
                    " --seed 999").exit_code == 0);
    REQUIRE(read_file(out_a / "trace_ts.csv") != read_file(out_b / "trace_ts.csv"));
}

TEST_CASE("bound sweep writes rows and validates constraints") {
    const fs::path out_dir = fs::temp_directory_path() / "tsvha_cli_bound";
    fs::remove_all(out_dir);
    const CliResult ok = run_cli("bound --gamma 1 2 --beta 1.3 --eps 0.25 --gaps 0.5 --horizon 1000 10000 --out " +
                                 out_dir.string());
    INFO(ok.err);
    REQUIRE(ok.exit_code == 0);
    const std::string csv = read_file(out_dir / "bound.csv");
    REQUIRE(csv.rfind("gamma,beta,epsilon,T,bound\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows

    const CliResult bad = run_cli("bound --gamma 2 --beta 1 --eps 0.5 --gaps 0.5 --horizon 1000 --out " +
                                  out_dir.string());
    REQUIRE(bad.exit_code == 2);
    REQUIRE(bad.err.find("2*beta/gamma - epsilon > 1") != std::string::npos);
}

TEST_CASE("unknown subcommands and flags exit 2 with usage text") {
    const CliResult unknown = run_cli("frobnicate");
    REQUIRE(unknown.exit_code == 2);
    REQUIRE_FALSE(unknown.err.empty());

    const CliResult bad_flag = run_cli("run --no-such-flag");
    REQUIRE(bad_flag.exit_code == 2);
    REQUIRE_FALSE(bad_flag.err.empty());
}

TEST_CASE("config errors exit 2 with the parser diagnostic") {
    const fs::path config = write_config("tsvha_cli_bad.cfg", "[experiment]\nhorizon = soon\n");
    const CliResult result = run_cli("run --config " + config.string());
    REQUIRE(result.exit_code == 2);
    REQUIRE(result.err.find("line 2") != std::string::npos);
}

TEST_CASE("analyze emits the q-function table") {
    const fs::path out_dir = fs::temp_directory_path() / "tsvha_cli_analyze";
    fs::remove_all(out_dir);
    const CliResult result =
        run_cli("analyze --mu1 0.6 --mu2 0.4 --k1 7 --k2 7 --agents 4 --out " + out_dir.string());
    REQUIRE(result.exit_code == 0);
    const std::string csv = read_file(out_dir / "analyze.csv");
    REQUIRE(csv.rfind("mu1,mu2,k1,k2,variant,N,p_star\n", 0) == 0);
    REQUIRE(csv.find("TS,1,0.655") != std::string::npos);
    REQUIRE(csv.find("C1,4,0.788") != std::string::npos);
    REQUIRE(csv.find("C2,4,0.579") != std::string::npos);
}

TEST_CASE("ingest converts raw schemas and reports data errors as runtime failures") {
    const fs::path raw = write_config("tsvha_cli_coupon.csv",
                                      "arm_id,purchase_rate,price\nc1,0.2,100\nc2,0.25,80\n");
    const fs::path out = fs::temp_directory_path() / "tsvha_cli_coupon_out.csv";
    const CliResult ok =
        run_cli("ingest --input " + raw.string() + " --schema coupon --out " + out.string());
    INFO(ok.err);
    REQUIRE(ok.exit_code == 0);
    const std::string csv = read_file(out);
    REQUIRE(csv.rfind("arm_id,mean\n", 0) == 0);
    REQUIRE(csv.find("c1,0.1\n") != std::string::npos);

    const fs::path bad = write_config("tsvha_cli_coupon_bad.csv",
                                      "arm_id,purchase_rate,price\nc1,0.9,100\n");
    const CliResult fail =
        run_cli("ingest --input " + bad.string() + " --schema coupon --out " + out.string());
    REQUIRE(fail.exit_code == 1);
    REQUIRE(fail.err.find("line 2") != std::string::npos);
}

TEST_CASE("run consumes a tabular environment end to end") {
    const fs::path table = write_config("tsvha_cli_table.csv", "arm_id,mean\na,0.9\nb,0.4\nc,0.1\n");
    const std::string config_text =
        "[experiment]\nhorizon = 40\nruns = 4\nseed = 5\n"
        "[env]\nfamily = tabular\ntable = " + table.string() + "\nnoise = bernoulli\n"
        "[policy]\nkind = ts\nfamily = beta\n";
    const fs::path config = write_config("tsvha_cli_tabular.cfg", config_text);
    const fs::path out_dir = fs::temp_directory_path() / "tsvha_cli_tabular_out";
    fs::remove_all(out_dir);
    const CliResult result = run_cli("run --config " + config.string() + " --out " + out_dir.string());
    INFO(result.err);
    REQUIRE(result.exit_code == 0);
    REQUIRE(fs::exists(out_dir / "trace_ts.csv"));
}
