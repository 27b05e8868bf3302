// milstack: multi-instance bag classification with a CNN ensemble searched by
// NSGA-II and combined through a stacked second-level classifier.
//
// Subcommands: ingest, optimize, stack, evaluate, predict.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "milstack/dataset.hpp"
#include "milstack/io.hpp"
#include "milstack/nsga2.hpp"
#include "milstack/pareto.hpp"
#include "milstack/stacking.hpp"
#include "milstack/validation.hpp"
#include "milstack/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace milstack;

namespace {

struct CommonOptions {
    std::string data_path;
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    int kfold = 0;  // 0 = automatic (LOO for N <= 200, else 10-fold)
    bool seed_given = false;
};

// Effective run settings; file config first, then flag overrides.
struct RunConfig {
    bool normalize = true;
    GaConfig ga;            // stage 1
    GaConfig stack_ga;      // stage 2
    std::uint64_t fold_seed = 0;

    RunConfig() {
        stack_ga.population = 60;
        stack_ga.generations = 60;
    }
};

RunConfig load_run_config(const CommonOptions& opts) {
    RunConfig config;
    if (!opts.config_path.empty()) {
        json doc = json::parse(read_text_file(opts.config_path));
        if (doc.contains("normalize")) config.normalize = doc["normalize"].get<bool>();
        if (doc.contains("ga")) config.ga = ga_config_from_json_text(doc["ga"].dump());
        if (doc.contains("stack_ga"))
            config.stack_ga = ga_config_from_json_text(doc["stack_ga"].dump());
        if (doc.contains("validation") && doc["validation"].contains("seed"))
            config.fold_seed = doc["validation"]["seed"].get<std::uint64_t>();
    }
    if (opts.seed_given) {
        config.ga.seed = opts.seed;
        config.stack_ga.seed = opts.seed + 1;  // stages draw from distinct streams
    }
    return config;
}

// Digest over the settings that shape results; paths and --jobs excluded so
// reruns from different locations or thread counts stamp identical artifacts.
std::string settings_digest(const RunConfig& config) {
    json doc{{"normalize", config.normalize},
             {"ga", json::parse(ga_config_to_json(config.ga))},
             {"stack_ga", json::parse(ga_config_to_json(config.stack_ga))},
             {"fold_seed", config.fold_seed}};
    return doc.dump();
}

Dataset load_any_dataset(const std::string& path, bool normalize) {
    if (looks_like_canonical_dataset(path)) {
        Dataset data = load_dataset(path);
        return normalize ? normalize_minmax(data) : data;
    }
    Dataset data = load_musk_csv(path);
    return normalize ? normalize_minmax(data) : data;
}

std::string out_path(const CommonOptions& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / name).string();
}

void print_summary(const Dataset& data) {
    std::cout << data.size() << " bags (" << data.count_label(kPositive) << " pos / "
              << data.count_label(kNegative) << " neg), " << data.instance_count()
              << " instances, " << data.dimensionality << " features\n";
}

int cmd_ingest(const CommonOptions& opts, bool no_normalize) {
    RunConfig config = load_run_config(opts);
    config.normalize = config.normalize && !no_normalize;

    Dataset data = load_any_dataset(opts.data_path, config.normalize);
    ArtifactMeta meta =
        ArtifactMeta::make(opts.seed, json{{"normalize", config.normalize}}.dump());
    save_dataset(out_path(opts, "dataset.json"), data, meta);
    print_summary(data);
    return 0;
}

int cmd_optimize(const CommonOptions& opts) {
    RunConfig config = load_run_config(opts);
    Dataset data = load_any_dataset(opts.data_path, config.normalize);

    ParetoFront front = evolve(data, config.ga, opts.jobs);

    ArtifactMeta meta = ArtifactMeta::make(config.ga.seed, settings_digest(config));
    save_front(out_path(opts, "front.json"), front, meta);

    auto rows = accuracy_table(front.objectives());
    std::string markdown = accuracy_table_markdown(rows);
    write_text_file(out_path(opts, "front_table.md"), markdown);
    write_text_file(out_path(opts, "front_table.csv"), accuracy_table_csv(rows));

    std::cout << "front of " << front.size() << " models (hypervolume "
              << hypervolume(front.objectives()) << ")\n"
              << markdown;
    return 0;
}

int cmd_stack(const CommonOptions& opts, const std::string& front_path) {
    RunConfig config = load_run_config(opts);
    Dataset data = load_any_dataset(opts.data_path, config.normalize);

    ParetoFront front = load_front(front_path, data.dimensionality);
    if (front.empty()) throw ContractError("front file '" + front_path + "' holds no members");

    MetaDataset meta_data = build_meta_dataset(data, front, opts.jobs);
    StackFront stack_front = tune_stack(meta_data, config.stack_ga, opts.jobs);

    ArtifactMeta meta = ArtifactMeta::make(config.stack_ga.seed, settings_digest(config));
    save_stack_front(out_path(opts, "stack_front.json"), stack_front, meta_data.columns(), meta);

    // the shipped model: best worst-class accuracy, then best sum, then the
    // deterministic front order
    std::size_t best = 0;
    auto score = [&](const StackFrontMember& m) {
        return std::pair(std::min(m.acc_pos, m.acc_neg), m.acc_pos + m.acc_neg);
    };
    for (std::size_t i = 1; i < stack_front.members.size(); ++i)
        if (score(stack_front.members[i]) > score(stack_front.members[best])) best = i;

    StackedModel model =
        assemble_stacked_model(data, meta_data, stack_front.members[best].genome);
    save_stacked_model(out_path(opts, "stacked_model.json"), model, meta);

    auto rows = accuracy_table(stack_front.objectives());
    std::string markdown = accuracy_table_markdown(rows);
    write_text_file(out_path(opts, "stack_table.md"), markdown);
    write_text_file(out_path(opts, "stack_table.csv"), accuracy_table_csv(rows));

    std::cout << "stacked front of " << stack_front.members.size()
              << " configurations (estimates are optimistic T2-row LOO; hypervolume "
              << hypervolume(stack_front.objectives()) << ")\n"
              << markdown;
    std::cout << "model written with " << model.members.size() << " members\n";
    return 0;
}

int cmd_evaluate(const CommonOptions& opts, const std::string& params_path,
                 const std::string& model_path) {
    RunConfig config = load_run_config(opts);
    Dataset data = load_any_dataset(opts.data_path, config.normalize);

    ValidationReport report;
    if (!params_path.empty()) {
        CnnParams params = cnn_params_from_json_file(params_path, data.dimensionality);
        if (opts.kfold > 0)
            report = kfold_validate(data, params, opts.kfold, config.fold_seed, opts.jobs);
        else if (data.size() > 200)
            report = kfold_validate(data, params, 10, config.fold_seed, opts.jobs);
        else
            report = loo_validate(data, params, opts.jobs);
    } else {
        StackedModel model = load_stacked_model(model_path, data.dimensionality);
        rehydrate_stacked_model(model, data, opts.jobs);
        StackGenome genome;
        genome.log_gamma = std::log10(model.gamma);
        genome.log_c = std::log10(model.c);
        genome.member_mask.assign(model.members.size(), 1);
        MetaDataset meta_data;
        meta_data.t2 = model.meta_rows;
        meta_data.labels = model.row_labels;
        meta_data.column_params = model.members;
        report = stack_loo_report(meta_data, genome, opts.jobs);
        std::cout << "stacked-model estimate is optimistic T2-row LOO\n";
    }

    ArtifactMeta meta = ArtifactMeta::make(opts.seed, settings_digest(config));
    save_validation_report(out_path(opts, "evaluation.json"), report, meta);
    std::cout << "scheme " << report.scheme.name() << ": Acc+ " << report.acc_pos << ", Acc- "
              << report.acc_neg << "\n";
    return 0;
}

int cmd_predict(const CommonOptions& opts, const std::string& model_path,
                const std::string& bag_id, const std::string& bags_path) {
    Dataset data = load_dataset(opts.data_path);
    StackedModel model = load_stacked_model(model_path, data.dimensionality);
    rehydrate_stacked_model(model, data, opts.jobs);

    auto emit = [&](const Bag& bag) {
        Label label = predict_bag(model, data, bag, opts.jobs);
        std::cout << bag.id << '\t' << (label == kPositive ? "+1" : "-1") << '\n';
    };

    if (!bag_id.empty()) {
        for (const Bag& bag : data.bags) {
            if (bag.id == bag_id) {
                emit(bag);
                return 0;
            }
        }
        throw ContractError("bag id '" + bag_id + "' not found in '" + opts.data_path + "'");
    }

    // external bag files carry raw feature values; scale them into the
    // model's normalized space
    json doc = json::parse(read_text_file(bags_path));
    const json& bag_list = doc.is_array() ? doc : doc.at("bags");
    for (const auto& bag_obj : bag_list) {
        Bag bag;
        bag.id = bag_obj.at("id").get<std::string>();
        bag.label = kNegative;
        for (const auto& inst : bag_obj.at("instances"))
            bag.instances.push_back(inst.get<Instance>());
        if (!model.normalization.empty()) bag = apply_normalization(bag, model.normalization);
        emit(bag);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) + " " + kVersion +
                 " - multi-instance bag classification via CNN ensembles"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    CommonOptions opts;
    bool no_normalize = false;
    std::string front_path, params_path, model_path, bag_id, bags_path;

    auto add_common = [&](CLI::App* cmd, bool needs_data = true) {
        auto* data_opt = cmd->add_option("--data", opts.data_path, "dataset file (musk CSV or canonical JSON)");
        if (needs_data) data_opt->required();
        cmd->add_option("--config", opts.config_path, "run-config JSON file");
        cmd->add_option("--seed", opts.seed, "global seed recorded in artifacts")
            ->each([&](const std::string&) { opts.seed_given = true; });
        cmd->add_option("--jobs", opts.jobs, "worker threads for parallel sections");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--kfold", opts.kfold, "use k-fold validation instead of LOO");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "load a dataset, normalize, write canonical JSON");
    add_common(ingest);
    ingest->add_flag("--no-normalize", no_normalize, "skip min-max feature scaling");

    CLI::App* optimize = app.add_subcommand("optimize", "NSGA-II search for a CNN ensemble front");
    add_common(optimize);

    CLI::App* stack = app.add_subcommand("stack", "build and tune the stacked ensemble from a front");
    add_common(stack);
    stack->add_option("--front", front_path, "front JSON from `optimize`")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "validate CNN params or a stacked model");
    add_common(evaluate);
    evaluate->add_option("--params", params_path, "CnnParams JSON file");
    evaluate->add_option("--model", model_path, "stacked model JSON file");

    CLI::App* predict = app.add_subcommand("predict", "label bags with a stacked model");
    add_common(predict);
    predict->add_option("--model", model_path, "stacked model JSON file")->required();
    predict->add_option("--bag-id", bag_id, "id of a bag in the dataset file");
    predict->add_option("--bags", bags_path, "JSON file of raw bags to label");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(opts, no_normalize);
        if (app.got_subcommand(optimize)) return cmd_optimize(opts);
        if (app.got_subcommand(stack)) return cmd_stack(opts, front_path);
        if (app.got_subcommand(evaluate)) {
            if (params_path.empty() == model_path.empty()) {
                std::cerr << "evaluate needs exactly one of --params or --model\n";
                return 2;
            }
            return cmd_evaluate(opts, params_path, model_path);
        }
        if (app.got_subcommand(predict)) {
            if (bag_id.empty() == bags_path.empty()) {
                std::cerr << "predict needs exactly one of --bag-id or --bags\n";
                return 2;
            }
            return cmd_predict(opts, model_path, bag_id, bags_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
