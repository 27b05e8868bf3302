#include "milstack/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "milstack/version.hpp"

namespace milstack {

using nlohmann::json;

namespace {

json meta_to_json(const ArtifactMeta& meta) {
    return json{{"tool_version", meta.tool_version},
                {"seed", meta.seed},
                {"config_digest", meta.config_digest}};
}

json params_to_json_obj(const CnnParams& params) {
    return json{{"eta_r", params.eta_r},
                {"eta_c", params.eta_c},
                {"d", params.d.d},
                {"theta", params.theta},
                {"features", params.s.indices()}};
}

CnnParams params_from_json_obj(const json& obj, std::size_t dimensionality) {
    CnnParams params;
    params.eta_r = obj.at("eta_r").get<int>();
    params.eta_c = obj.at("eta_c").get<int>();
    params.d = RankParameter{obj.at("d").get<int>()};
    params.theta = obj.at("theta").get<double>();
    params.s = FeatureSubset(obj.at("features").get<std::vector<std::size_t>>(), dimensionality);
    return params;
}

json normalization_to_json(const Normalization& normalization) {
    json arr = json::array();
    for (const auto& [lo, hi] : normalization) arr.push_back(json::array({lo, hi}));
    return arr;
}

Normalization normalization_from_json(const json& arr) {
    Normalization out;
    out.reserve(arr.size());
    for (const auto& pair : arr) out.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return out;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw IngestError("invalid JSON in '" + path + "': " + e.what());
    }
    return doc;
}

void dump_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

ArtifactMeta ArtifactMeta::make(std::uint64_t seed, const std::string& settings_json) {
    ArtifactMeta meta;
    meta.tool_version = std::string(kToolName) + " " + kVersion;
    meta.seed = seed;
    meta.config_digest = fnv1a_hex(settings_json);
    return meta;
}

void save_dataset(const std::string& path, const Dataset& data, const ArtifactMeta& meta) {
    json bags = json::array();
    for (const Bag& bag : data.bags) {
        json instances = json::array();
        for (const Instance& inst : bag.instances) instances.push_back(inst);
        bags.push_back(json{{"id", bag.id}, {"label", bag.label}, {"instances", instances}});
    }
    json doc{{"dimensionality", data.dimensionality},
             {"normalization", normalization_to_json(data.normalization)},
             {"bags", bags},
             {"meta", meta_to_json(meta)}};
    dump_file(path, doc);
}

Dataset load_dataset(const std::string& path) {
    json doc = parse_file(path);
    Dataset data;
    data.dimensionality = doc.at("dimensionality").get<std::size_t>();
    data.normalization = normalization_from_json(doc.at("normalization"));
    for (const auto& bag_obj : doc.at("bags")) {
        Bag bag;
        bag.id = bag_obj.at("id").get<std::string>();
        bag.label = bag_obj.at("label").get<int>();
        for (const auto& inst : bag_obj.at("instances"))
            bag.instances.push_back(inst.get<Instance>());
        data.bags.push_back(std::move(bag));
    }
    validate_dataset(data);
    return data;
}

bool looks_like_canonical_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) return false;
    char ch;
    while (in.get(ch)) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        return ch == '{';
    }
    return false;
}

std::string cnn_params_to_json(const CnnParams& params) {
    return params_to_json_obj(params).dump(2);
}

CnnParams cnn_params_from_json_file(const std::string& path, std::size_t dimensionality) {
    return params_from_json_obj(parse_file(path), dimensionality);
}

GaConfig ga_config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IngestError(std::string("invalid GA config JSON: ") + e.what());
    }
    GaConfig config;
    if (doc.contains("population")) config.population = doc["population"].get<int>();
    if (doc.contains("generations")) config.generations = doc["generations"].get<int>();
    if (doc.contains("crossover_prob")) config.crossover_prob = doc["crossover_prob"].get<double>();
    if (doc.contains("mutation_prob")) config.mutation_prob = doc["mutation_prob"].get<double>();
    if (doc.contains("eta_max")) config.eta_max = doc["eta_max"].get<int>();
    if (doc.contains("d_max")) config.d_max = doc["d_max"].get<int>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    config.validate();
    return config;
}

std::string ga_config_to_json(const GaConfig& config) {
    json doc{{"population", config.population},
             {"generations", config.generations},
             {"crossover_prob", config.crossover_prob},
             {"mutation_prob", config.mutation_prob},
             {"eta_max", config.eta_max},
             {"d_max", config.d_max},
             {"seed", config.seed}};
    return doc.dump(2);
}

void save_front(const std::string& path, const ParetoFront& front, const ArtifactMeta& meta) {
    json members = json::array();
    for (const FrontMember& m : front.members) {
        members.push_back(json{{"params", params_to_json_obj(m.params)},
                               {"acc_pos", m.acc_pos},
                               {"acc_neg", m.acc_neg}});
    }
    dump_file(path, json{{"front", members}, {"meta", meta_to_json(meta)}});
}

ParetoFront load_front(const std::string& path, std::size_t dimensionality) {
    json doc = parse_file(path);
    ParetoFront front;
    for (const auto& obj : doc.at("front")) {
        FrontMember m;
        m.params = params_from_json_obj(obj.at("params"), dimensionality);
        m.acc_pos = obj.at("acc_pos").get<double>();
        m.acc_neg = obj.at("acc_neg").get<double>();
        front.members.push_back(std::move(m));
    }
    return front;
}

void save_stack_front(const std::string& path, const StackFront& front, std::size_t columns,
                      const ArtifactMeta& meta) {
    json members = json::array();
    for (const StackFrontMember& m : front.members) {
        members.push_back(json{{"params",
                                json{{"gamma", m.genome.gamma()},
                                     {"c", m.genome.c()},
                                     {"members", m.genome.selected()}}},
                               {"acc_pos", m.acc_pos},
                               {"acc_neg", m.acc_neg}});
    }
    dump_file(path, json{{"front", members}, {"columns", columns}, {"meta", meta_to_json(meta)}});
}

void save_stacked_model(const std::string& path, const StackedModel& model,
                        const ArtifactMeta& meta) {
    json members = json::array();
    for (const CnnParams& params : model.members) members.push_back(params_to_json_obj(params));
    json doc{{"members", members},
             {"gamma", model.gamma},
             {"c", model.c},
             {"alphas", model.alphas},
             {"bias", model.bias},
             {"normalization", normalization_to_json(model.normalization)},
             {"meta", meta_to_json(meta)}};
    dump_file(path, doc);
}

StackedModel load_stacked_model(const std::string& path, std::size_t dimensionality) {
    json doc = parse_file(path);
    StackedModel model;
    for (const auto& obj : doc.at("members"))
        model.members.push_back(params_from_json_obj(obj, dimensionality));
    model.gamma = doc.at("gamma").get<double>();
    model.c = doc.at("c").get<double>();
    model.alphas = doc.at("alphas").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.normalization = normalization_from_json(doc.at("normalization"));
    return model;
}

void save_validation_report(const std::string& path, const ValidationReport& report,
                            const ArtifactMeta& meta) {
    json doc{{"acc_pos", report.acc_pos},
             {"acc_neg", report.acc_neg},
             {"scheme", report.scheme.name()},
             {"predictions", report.predictions},
             {"meta", meta_to_json(meta)}};
    dump_file(path, doc);
}

std::vector<AccuracyTableRow> accuracy_table(const std::vector<Objectives>& points) {
    std::vector<AccuracyTableRow> rows;
    for (const Objectives& p : points) {
        bool merged = false;
        for (AccuracyTableRow& row : rows) {
            if (row.acc_pos == p.first && row.acc_neg == p.second) {
                ++row.model_count;
                merged = true;
                break;
            }
        }
        if (!merged) rows.push_back({p.second, p.first, 1});
    }
    std::sort(rows.begin(), rows.end(), [](const AccuracyTableRow& a, const AccuracyTableRow& b) {
        if (a.acc_neg != b.acc_neg) return a.acc_neg > b.acc_neg;
        return a.acc_pos > b.acc_pos;
    });
    return rows;
}

namespace {

std::string percent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", value * 100.0);
    return buf;
}

}  // namespace

std::string accuracy_table_markdown(const std::vector<AccuracyTableRow>& rows) {
    std::ostringstream out;
    out << "| Class 0 accuracy | Class 1 accuracy | # Models |\n";
    out << "|-----------------:|-----------------:|---------:|\n";
    for (const AccuracyTableRow& row : rows)
        out << "| " << percent(row.acc_neg) << " | " << percent(row.acc_pos) << " | "
            << row.model_count << " |\n";
    return out.str();
}

std::string accuracy_table_csv(const std::vector<AccuracyTableRow>& rows) {
    std::ostringstream out;
    out << "class0_accuracy,class1_accuracy,models\n";
    for (const AccuracyTableRow& row : rows)
        out << percent(row.acc_neg) << ',' << percent(row.acc_pos) << ',' << row.model_count
            << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write '" + path + "'");
    out << text;
}

}  // namespace milstack
