#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "covpanel/date.hpp"
#include "covpanel/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
    const char* bin = std::getenv("COVPANEL_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

int run(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("covpanel_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

const std::string k_sim_args =
    "--n-instruments 6 --panel-start 2018-01-01 --panel-end 2021-12-31 "
    "--listing-spread-days 400 --holiday-rate 0.05 --seed 7";

}  // namespace

TEST_CASE("simulate writes a deterministic corpus in ingestion layout") {
    TempDir tmp;
    const fs::path a = tmp.path / "run_a";
    const fs::path b = tmp.path / "run_b";
    REQUIRE(run("simulate --out " + a.string() + " " + k_sim_args) == 0);
    REQUIRE(run("simulate --out " + b.string() + " " + k_sim_args) == 0);

    CHECK(fs::exists(a / "adjusted" / "SYN001.csv"));
    CHECK(fs::exists(a / "unadjusted" / "SYN006.csv"));
    CHECK(fs::exists(a / "ground_truth.json"));

    // identical trees from the same seed
    CHECK(slurp(a / "unadjusted" / "SYN003.csv") == slurp(b / "unadjusted" / "SYN003.csv"));
    CHECK(slurp(a / "ground_truth.json") == slurp(b / "ground_truth.json"));

    // five-day default week: emitted files contain no weekend dates
    std::istringstream csv(slurp(a / "unadjusted" / "SYN001.csv"));
    std::string line;
    std::getline(csv, line);  // header
    int rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        CHECK(covpanel::Date::parse_iso(line.substr(0, 10)).weekday_mon0() < 5);
        ++rows;
    }
    CHECK(rows > 100);
}

TEST_CASE("ingest and analyze run end-to-end and deterministically") {
    TempDir tmp;
    const fs::path corpus = tmp.path / "corpus";
    REQUIRE(run("simulate --out " + corpus.string() + " " + k_sim_args) == 0);

    const std::string dirs = "--adjusted " + (corpus / "adjusted").string() + " --unadjusted " +
                             (corpus / "unadjusted").string();

    const fs::path ing1 = tmp.path / "ingest1";
    const fs::path ing2 = tmp.path / "ingest2";
    REQUIRE(run("ingest " + dirs + " --out " + ing1.string()) == 0);
    REQUIRE(run("ingest " + dirs + " --out " + ing2.string()) == 0);
    for (const char* name : {"availability_matrix.csv", "metadata.json", "ingest_report.json"}) {
        CHECK(fs::exists(ing1 / name));
        CHECK(slurp(ing1 / name) == slurp(ing2 / name));
    }

    // matrix has one column per ticker
    std::istringstream matrix(slurp(ing1 / "availability_matrix.csv"));
    std::string header;
    std::getline(matrix, header);
    CHECK(covpanel::split_csv_line(header).size() == 7);  // date + 6 tickers

    const std::string analyze_args =
        "analyze " + dirs +
        " --naive both --listed-after 2017-12-31 --min-trading-days 100 --threads 2";
    const fs::path out1 = tmp.path / "analysis1";
    const fs::path out2 = tmp.path / "analysis2";
    REQUIRE(run(analyze_args + " --out " + out1.string()) == 0);
    REQUIRE(run(analyze_args + " --out " + out2.string()) == 0);

    for (const char* name :
         {"distortion_records.csv", "summary.json", "arima_stats.csv", "garch_fits.json",
          "distortion_histogram_forward_filled.csv", "distortion_quartiles_forward_filled.csv",
          "distortion_vs_padding_forward_filled.csv", "distortion_histogram_backward_filled.csv",
          "distortion_vs_padding_backward_filled.csv"}) {
        CHECK(fs::exists(out1 / name));
        CHECK(slurp(out1 / name) == slurp(out2 / name));
    }

    // every simulated instrument was selected and produced four records
    std::istringstream records(slurp(out1 / "distortion_records.csv"));
    std::string line;
    std::getline(records, line);
    int n_records = 0;
    while (std::getline(records, line))
        if (!line.empty()) ++n_records;
    CHECK(n_records == 6 * 2 * 2);  // tickers x {forward,backward} x {return_std,garch}

    const fs::path report = tmp.path / "report.md";
    REQUIRE(run("report --analysis " + out1.string() + " --out " + report.string()) == 0);
    const std::string md = slurp(report);
    CHECK(md.find("# Coverage-aware panel analysis") != std::string::npos);
    CHECK(md.find("## Aggregate distortion") != std::string::npos);
    CHECK(md.find("### SYN001") != std::string::npos);
    CHECK(md.find("| coverage_aware |") != std::string::npos);
    CHECK(md.find("sign test p") != std::string::npos);
}

TEST_CASE("simulate with zero instruments writes an empty corpus") {
    TempDir tmp;
    const fs::path out = tmp.path / "empty";
    REQUIRE(run("simulate --out " + out.string() + " --n-instruments 0") == 0);
    CHECK(fs::is_directory(out / "adjusted"));
    CHECK(fs::is_directory(out / "unadjusted"));
    CHECK(slurp(out / "ground_truth.json").find("\"instruments\": []") != std::string::npos);
}

TEST_CASE("exit codes distinguish failure classes") {
    TempDir tmp;
    // usage error
    CHECK(run("analyze --naive sideways --out " + (tmp.path / "x").string()) == 2);
    // missing inputs are configuration errors
    CHECK(run("ingest --adjusted /nonexistent_a --unadjusted /nonexistent_b --out " +
              (tmp.path / "y").string()) == 2);
    // selection matching nothing is an analysis failure
    const fs::path corpus = tmp.path / "corpus";
    REQUIRE(run("simulate --out " + corpus.string() + " --n-instruments 2 " +
                "--panel-start 2018-01-01 --panel-end 2019-12-31 --seed 3") == 0);
    CHECK(run("analyze --adjusted " + (corpus / "adjusted").string() + " --unadjusted " +
              (corpus / "unadjusted").string() + " --out " + (tmp.path / "z").string() +
              " --listed-after 2025-01-01") == 4);
    // report without an analysis directory
    CHECK(run("report --analysis " + (tmp.path / "nothing_here").string()) == 2);
}

TEST_CASE("config file supplies defaults that flags can override") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.ini";
    const fs::path out = tmp.path / "sim";
    {
        std::ofstream f(cfg);
        f << "[simulate]\n"
          << "out=" << out.string() << "\n"
          << "n-instruments=3\n"
          << "panel-start=2019-01-01\n"
          << "panel-end=2020-12-31\n"
          << "seed=11\n";
    }
    REQUIRE(run("--config " + cfg.string() + " simulate") == 0);
    CHECK(fs::exists(out / "unadjusted" / "SYN003.csv"));
    CHECK_FALSE(fs::exists(out / "unadjusted" / "SYN004.csv"));

    // flag overrides the config value
    const fs::path out2 = tmp.path / "sim2";
    REQUIRE(run("--config " + cfg.string() + " simulate --out " + out2.string() +
                " --n-instruments 1") == 0);
    CHECK(fs::exists(out2 / "unadjusted" / "SYN001.csv"));
    CHECK_FALSE(fs::exists(out2 / "unadjusted" / "SYN002.csv"));
}
