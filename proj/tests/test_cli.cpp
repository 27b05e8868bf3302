#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "milstack/dataset.hpp"
#include "milstack/io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace milstack;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string out_file =
        (fs::temp_directory_path() / "milstack_cli_output.txt").string();
    const std::string command =
        std::string(MILSTACK_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_text_file(out_file);
    return result;
}

// scratch directory per test run
struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / "milstack_cli_scratch") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string write_toy_dataset(const Scratch& scratch) {
    Dataset data = testsupport::separable_dataset(6);
    std::string path = scratch.path("toy.json");
    save_dataset(path, data, ArtifactMeta::make(0, "{}"));
    return path;
}

std::string tiny_ga_config(const Scratch& scratch) {
    std::string path = scratch.path("config.json");
    write_text_file(path,
                    R"({"ga": {"population": 16, "generations": 8, "eta_max": 3, "d_max": 2, "seed": 5},)"
                    R"( "stack_ga": {"population": 12, "generations": 6, "seed": 6}})");
    return path;
}

}  // namespace

TEST_CASE("cli ingest") {
    Scratch scratch;

    SUBCASE("musk file summary and idempotent re-ingestion") {
        CliResult first = run_cli("ingest --data " + std::string(MILSTACK_MUSK1_PATH) +
                                  " --out " + scratch.path("a"));
        REQUIRE(first.exit_code == 0);
        CHECK(first.output.find("92 bags (47 pos / 45 neg), 476 instances, 166 features") !=
              std::string::npos);

        CliResult second = run_cli("ingest --data " + scratch.path("a") + "/dataset.json" +
                                   " --out " + scratch.path("b"));
        REQUIRE(second.exit_code == 0);
        CHECK(read_text_file(scratch.path("a") + "/dataset.json") ==
              read_text_file(scratch.path("b") + "/dataset.json"));
    }

    SUBCASE("malformed file names the line and exits nonzero") {
        std::string bad = scratch.path("bad.csv");
        write_text_file(bad, "MOL,conf,1,2,3,1\n");
        CliResult result = run_cli("ingest --data " + bad + " --out " + scratch.path("o"));
        CHECK(result.exit_code != 0);
        CHECK(result.output.find("line 1") != std::string::npos);
    }
}

TEST_CASE("cli optimize, stack, evaluate, predict on the toy set") {
    Scratch scratch;
    std::string data = write_toy_dataset(scratch);
    std::string config = tiny_ga_config(scratch);

    // optimize: deterministic, table contains a perfect row
    CliResult opt = run_cli("optimize --data " + data + " --config " + config + " --out " +
                            scratch.path("run1"));
    REQUIRE(opt.exit_code == 0);
    CHECK(opt.output.find("100.00% | 100.00%") != std::string::npos);

    CliResult opt2 = run_cli("optimize --data " + data + " --config " + config + " --out " +
                             scratch.path("run2") + " --jobs 2");
    REQUIRE(opt2.exit_code == 0);
    CHECK(read_text_file(scratch.path("run1") + "/front.json") ==
          read_text_file(scratch.path("run2") + "/front.json"));

    // stack: builds a model from the front
    CliResult stack = run_cli("stack --data " + data + " --front " + scratch.path("run1") +
                              "/front.json --config " + config + " --out " + scratch.path("run1"));
    REQUIRE(stack.exit_code == 0);
    CHECK(fs::exists(scratch.path("run1") + "/stacked_model.json"));

    CliResult stack2 = run_cli("stack --data " + data + " --front " + scratch.path("run2") +
                               "/front.json --config " + config + " --out " + scratch.path("run2") +
                               " --jobs 2");
    REQUIRE(stack2.exit_code == 0);
    CHECK(read_text_file(scratch.path("run1") + "/stacked_model.json") ==
          read_text_file(scratch.path("run2") + "/stacked_model.json"));

    // evaluate the model (optimistic meta LOO on a separable toy is perfect)
    CliResult eval = run_cli("evaluate --data " + data + " --model " + scratch.path("run1") +
                             "/stacked_model.json --out " + scratch.path("run1"));
    REQUIRE(eval.exit_code == 0);
    CHECK(eval.output.find("Acc+ 1") != std::string::npos);

    // predict a training bag: replays its own label
    CliResult predict =
        run_cli("predict --data " + data + " --model " + scratch.path("run1") +
                "/stacked_model.json --bag-id pos0");
    REQUIRE(predict.exit_code == 0);
    CHECK(predict.output == "pos0\t+1\n");

    // batch prediction preserves input order; raw values are normalized in
    std::string bags = scratch.path("bags.json");
    write_text_file(bags, R"([
      {"id": "q1", "instances": [[1.0], [0.98]]},
      {"id": "q2", "instances": [[0.02], [0.05]]},
      {"id": "q3", "instances": [[0.99]]}
    ])");
    CliResult batch = run_cli("predict --data " + data + " --model " + scratch.path("run1") +
                              "/stacked_model.json --bags " + bags);
    REQUIRE(batch.exit_code == 0);
    CHECK(batch.output == "q1\t+1\nq2\t-1\nq3\t+1\n");

    // unknown bag id exits nonzero
    CliResult missing = run_cli("predict --data " + data + " --model " + scratch.path("run1") +
                                "/stacked_model.json --bag-id nosuch");
    CHECK(missing.exit_code != 0);

    // wrong dimensionality exits nonzero
    std::string bad_bags = scratch.path("bad_bags.json");
    write_text_file(bad_bags, R"([{"id": "w", "instances": [[1.0, 2.0]]}])");
    CliResult bad = run_cli("predict --data " + data + " --model " + scratch.path("run1") +
                            "/stacked_model.json --bags " + bad_bags);
    CHECK(bad.exit_code != 0);
}

TEST_CASE("cli evaluate with explicit params and kfold") {
    Scratch scratch;
    std::string data = write_toy_dataset(scratch);

    std::string params = scratch.path("params.json");
    write_text_file(params,
                    R"({"eta_r": 1, "eta_c": 1, "d": 1, "theta": 0.5, "features": [0]})");

    CliResult loo = run_cli("evaluate --data " + data + " --params " + params + " --out " +
                            scratch.path("e1"));
    REQUIRE(loo.exit_code == 0);
    CHECK(loo.output.find("scheme loo") != std::string::npos);
    CHECK(loo.output.find("Acc+ 1") != std::string::npos);

    CliResult kf = run_cli("evaluate --data " + data + " --params " + params +
                           " --kfold 3 --out " + scratch.path("e2"));
    REQUIRE(kf.exit_code == 0);
    CHECK(kf.output.find("kfold(k=3") != std::string::npos);

    // exactly one of --params / --model
    CliResult both = run_cli("evaluate --data " + data + " --params " + params + " --model " +
                             params);
    CHECK(both.exit_code != 0);
}
