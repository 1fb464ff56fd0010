// ontoport command line: ingest LMS logs, build ontology features, train
// per-course trees and evaluate cross-course transfer.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ontoport/discretizer.hpp"
#include "ontoport/event_log.hpp"
#include "ontoport/ontology.hpp"
#include "ontoport/report.hpp"
#include "ontoport/synth.hpp"
#include "ontoport/transfer.hpp"
#include "ontoport/tree.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ontoport;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 1;
constexpr int kExitDataError = 2;
constexpr int kExitInternalError = 3;

struct CourseInput {
    std::string code;
    fs::path log;
    fs::path marks;
};

struct Options {
    std::vector<CourseInput> courses;
    fs::path courses_dir;
    fs::path out = ".";
    fs::path taxonomy_path;
    std::string representation = "both";
    std::vector<std::string> formats = {"csv", "markdown"};
    bool raw_features = false;
    bool comma_decimals = false;
    std::uint64_t seed = 0;
    TrainConfig train;
};

class UserError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void apply_config_file(Options& opt, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open config file " + path.string());
    json cfg = json::parse(in);
    for (const auto& c : cfg.value("courses", json::array())) {
        opt.courses.push_back({c.at("code").get<std::string>(),
                               fs::path(c.at("log").get<std::string>()),
                               fs::path(c.at("marks").get<std::string>())});
    }
    if (cfg.contains("courses_dir")) opt.courses_dir = cfg["courses_dir"].get<std::string>();
    if (cfg.contains("out")) opt.out = cfg["out"].get<std::string>();
    if (cfg.contains("taxonomy")) opt.taxonomy_path = cfg["taxonomy"].get<std::string>();
}

std::vector<CourseInput> discover_courses(const Options& opt) {
    std::vector<CourseInput> courses = opt.courses;
    if (!opt.courses_dir.empty()) {
        if (!fs::is_directory(opt.courses_dir)) {
            throw UserError("not a directory: " + opt.courses_dir.string());
        }
        for (const auto& entry : fs::directory_iterator(opt.courses_dir)) {
            const std::string name = entry.path().filename().string();
            constexpr std::string_view suffix = ".log.csv";
            if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
            const std::string code = name.substr(0, name.size() - suffix.size());
            const fs::path marks = entry.path().parent_path() / (code + ".marks.csv");
            if (!fs::exists(marks)) {
                throw UserError("missing marks file for course '" + code + "': " + marks.string());
            }
            courses.push_back({code, entry.path(), marks});
        }
    }
    if (courses.empty()) {
        throw UserError("no input courses; use --courses-dir or --code/--log/--marks");
    }
    std::sort(courses.begin(), courses.end(),
              [](const CourseInput& a, const CourseInput& b) { return a.code < b.code; });
    return courses;
}

CourseLog load_course(const CourseInput& input) {
    std::ifstream log_in(input.log);
    if (!log_in) throw UserError("cannot open log file " + input.log.string());
    std::ifstream marks_in(input.marks);
    if (!marks_in) throw UserError("cannot open marks file " + input.marks.string());
    return parse_course_log(log_in, marks_in, input.code);
}

ActionTaxonomy load_taxonomy_opt(const Options& opt) {
    if (opt.taxonomy_path.empty()) return ActionTaxonomy::builtin();
    std::ifstream in(opt.taxonomy_path);
    if (!in) throw UserError("cannot open taxonomy file " + opt.taxonomy_path.string());
    return load_taxonomy(in);
}

void add_course_flags(CLI::App* cmd, Options& opt, std::vector<std::string>& codes,
                      std::vector<std::string>& logs, std::vector<std::string>& marks) {
    cmd->add_option("--courses-dir", opt.courses_dir,
                    "directory of <code>.log.csv / <code>.marks.csv pairs");
    cmd->add_option("--code", codes, "course code (repeatable, paired with --log/--marks)");
    cmd->add_option("--log", logs, "event log CSV (repeatable)");
    cmd->add_option("--marks", marks, "final marks CSV (repeatable)");
}

void collect_explicit_courses(Options& opt, const std::vector<std::string>& codes,
                              const std::vector<std::string>& logs,
                              const std::vector<std::string>& marks) {
    if (codes.size() != logs.size() || codes.size() != marks.size()) {
        throw UserError("--code, --log and --marks must be given the same number of times");
    }
    for (std::size_t i = 0; i < codes.size(); ++i) {
        opt.courses.push_back({codes[i], fs::path(logs[i]), fs::path(marks[i])});
    }
}

int cmd_ingest(const Options& opt) {
    fs::create_directories(opt.out);
    int failures = 0;
    for (const CourseInput& input : discover_courses(opt)) {
        try {
            const CourseLog course = load_course(input);
            std::ofstream log_out(opt.out / (input.code + ".log.csv"));
            std::ofstream marks_out(opt.out / (input.code + ".marks.csv"));
            write_course_log(course, log_out, marks_out);
            std::cout << input.code << ": " << course.events.size() << " events, "
                      << course.marks.size() << " graded students";
            if (!course.warnings.empty()) std::cout << ", " << course.warnings.size() << " warning(s)";
            std::cout << '\n';
            for (const std::string& w : course.warnings) std::cout << "  warning: " << w << '\n';
        } catch (const DataError& e) {
            ++failures;
            std::cout << input.code << ": FAILED (" << e.what() << ")\n";
        }
    }
    if (failures > 0) {
        std::cout << failures << " course(s) failed ingestion\n";
        return kExitDataError;
    }
    return kExitOk;
}

int cmd_featurize(const Options& opt) {
    const ActionTaxonomy taxonomy = load_taxonomy_opt(opt);
    fs::create_directories(opt.out);
    const bool want_numeric = opt.representation != "discretized";
    const bool want_discretized = opt.representation != "numeric";
    int failures = 0;

    for (const CourseInput& input : discover_courses(opt)) {
        try {
            const CourseLog course = load_course(input);
            const PreparedCourse p = prepare_course(course, taxonomy, opt.raw_features);
            const auto write_table = [&](const DataTable& table, const std::string& tag) {
                std::ofstream out(opt.out / (input.code + "." + tag + ".csv"));
                write_dataset_csv(table, out);
            };
            if (want_numeric) write_table(p.numeric_table, "numeric");
            if (want_discretized) write_table(p.discretized_table, "discretized");
            {
                std::ofstream cut(opt.out / (input.code + ".cutpoints.json"));
                cut << cutpoints_to_json(p.cutpoints).dump(2) << '\n';
            }
            if (opt.raw_features) {
                if (want_numeric) write_table(p.raw_numeric, "raw-numeric");
                if (want_discretized) write_table(p.raw_discretized, "raw-discretized");
                std::ofstream cut(opt.out / (input.code + ".raw.cutpoints.json"));
                cut << cutpoints_to_json(p.raw_cutpoints).dump(2) << '\n';
            }
            std::cout << input.code << ": " << p.numeric_table.n_rows() << " students, usage "
                      << to_string(p.level) << '\n';
            for (const std::string& w : p.features.warnings) std::cout << "  warning: " << w << '\n';
            const std::size_t need = 2 * static_cast<std::size_t>(opt.train.min_instances_per_leaf);
            if (p.numeric_table.n_rows() < need || !p.numeric_table.has_both_classes()) {
                std::cout << "  warning: dataset too small or single-class; training will fail "
                             "downstream\n";
            }
        } catch (const DataError& e) {
            ++failures;
            std::cout << input.code << ": FAILED (" << e.what() << ")\n";
        }
    }
    if (failures > 0) {
        std::cout << failures << " course(s) failed featurization\n";
        return kExitDataError;
    }
    return kExitOk;
}

int cmd_eval_transfer(const Options& opt) {
    const ActionTaxonomy taxonomy = load_taxonomy_opt(opt);
    std::vector<CourseLog> courses;
    for (const CourseInput& input : discover_courses(opt)) {
        courses.push_back(load_course(input));
    }

    ExperimentOptions exp;
    exp.config = opt.train;
    exp.config.random_seed = opt.seed;
    exp.seed = opt.seed;
    exp.numeric = opt.representation != "discretized";
    exp.discretized = opt.representation != "numeric";
    exp.raw_mode = opt.raw_features;

    const ExperimentResult result = run_experiment(courses, taxonomy, exp);
    for (const std::string& s : result.skipped) std::cout << s << '\n';
    for (const std::string& w : result.warnings) std::cout << "warning: " << w << '\n';
    if (result.reports.empty()) {
        std::cout << "no usable course groups\n";
        return kExitDataError;
    }

    fs::create_directories(opt.out);
    const bool csv = std::find(opt.formats.begin(), opt.formats.end(), "csv") != opt.formats.end();
    const bool markdown =
        std::find(opt.formats.begin(), opt.formats.end(), "markdown") != opt.formats.end();
    for (const TransferReport& report : result.reports) {
        emit_report(report, opt.out, csv, markdown, opt.comma_decimals);
        std::cout << to_string(report.level) << " group: " << report.courses.size()
                  << " course(s), " << report.blocks.size() << " block(s)";
        std::size_t undefined = 0;
        for (const ReportBlock& b : report.blocks) undefined += b.matrices.undefined_auc_cells;
        if (undefined > 0) std::cout << ", " << undefined << " undefined cell(s)";
        std::cout << '\n';
    }
    return kExitOk;
}

int cmd_synth(const Options& opt, const std::vector<std::string>& spec_files) {
    fs::create_directories(opt.out);
    for (const std::string& spec_file : spec_files) {
        std::ifstream in(spec_file);
        if (!in) throw UserError("cannot open spec file " + spec_file);
        const CourseSpec spec = parse_course_spec(in);
        const CourseLog course = generate_course(spec);
        std::ofstream log_out(opt.out / (spec.course_code + ".log.csv"));
        std::ofstream marks_out(opt.out / (spec.course_code + ".marks.csv"));
        write_course_log(course, log_out, marks_out);
        std::cout << spec.course_code << ": " << course.events.size() << " events, "
                  << course.marks.size() << " students, usage " << to_string(usage_level(course))
                  << '\n';
        for (const std::string& w : course.warnings) std::cout << "  warning: " << w << '\n';
    }
    return kExitOk;
}

int cmd_render_tree(const Options& opt, const std::string& dataset_file,
                    const std::string& model_file, const std::string& save_model) {
    DecisionTree tree;
    if (!model_file.empty()) {
        std::ifstream in(model_file);
        if (!in) throw UserError("cannot open model file " + model_file);
        tree = tree_from_json(json::parse(in));
    } else if (!dataset_file.empty()) {
        std::ifstream in(dataset_file);
        if (!in) throw UserError("cannot open dataset file " + dataset_file);
        const std::string code = fs::path(dataset_file).filename().string();
        TrainConfig config = opt.train;
        config.random_seed = opt.seed;
        tree = train(read_dataset_csv(in, code.substr(0, code.find('.'))), config);
    } else {
        throw UserError("render-tree needs --dataset or --model");
    }
    std::cout << render_tree(tree);
    if (!save_model.empty()) {
        std::ofstream out(save_model);
        out << tree_to_json(tree).dump(2) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ontology-based portability evaluation for student performance models"};
    app.require_subcommand(1);

    Options opt;
    std::string config_file;
    app.add_option("--config", config_file, "JSON config file; flags override its values");

    std::vector<std::string> codes, logs, marks;
    std::vector<std::string> spec_files;
    std::string dataset_file, model_file, save_model;
    std::string formats_csv;

    CLI::App* ingest = app.add_subcommand("ingest", "parse and canonicalize course logs");
    add_course_flags(ingest, opt, codes, logs, marks);
    ingest->add_option("--out", opt.out, "output directory");

    CLI::App* featurize = app.add_subcommand("featurize", "build per-student feature datasets");
    add_course_flags(featurize, opt, codes, logs, marks);
    featurize->add_option("--out", opt.out, "output directory");
    featurize->add_option("--taxonomy", opt.taxonomy_path, "taxonomy file (default: built-in)");
    featurize->add_option("--representation", opt.representation, "numeric|discretized|both")
        ->check(CLI::IsMember({"numeric", "discretized", "both"}));
    featurize->add_flag("--raw-features", opt.raw_features, "also emit per-action datasets");

    CLI::App* eval = app.add_subcommand("eval-transfer", "run the cross-course experiment");
    add_course_flags(eval, opt, codes, logs, marks);
    eval->add_option("--out", opt.out, "output directory");
    eval->add_option("--taxonomy", opt.taxonomy_path, "taxonomy file (default: built-in)");
    eval->add_option("--representation", opt.representation, "numeric|discretized|both")
        ->check(CLI::IsMember({"numeric", "discretized", "both"}));
    eval->add_option("--seed", opt.seed, "balancing seed");
    eval->add_option("--min-leaf", opt.train.min_instances_per_leaf, "minimum instances per leaf");
    eval->add_option("--confidence", opt.train.pruning_confidence, "pruning confidence");
    eval->add_flag("!--no-prune", opt.train.pruning_enabled, "disable pruning");
    eval->add_flag("--raw-features", opt.raw_features, "add the no-ontology baseline blocks");
    eval->add_option("--formats", formats_csv, "comma list of csv,markdown (default both)");
    eval->add_flag("--comma-decimals", opt.comma_decimals, "comma decimal marks in markdown");

    CLI::App* synth = app.add_subcommand("synth", "generate synthetic courses from spec files");
    synth->add_option("--out", opt.out, "output directory");
    synth->add_option("specs", spec_files, "course spec files")->required();

    CLI::App* render = app.add_subcommand("render-tree", "train or load a model and print it");
    render->add_option("--dataset", dataset_file, "dataset CSV to train on");
    render->add_option("--model", model_file, "stored model JSON to render");
    render->add_option("--save-model", save_model, "write the trained model JSON here");
    render->add_option("--min-leaf", opt.train.min_instances_per_leaf, "minimum instances per leaf");
    render->add_option("--confidence", opt.train.pruning_confidence, "pruning confidence");
    render->add_flag("!--no-prune", opt.train.pruning_enabled, "disable pruning");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) {
            Options from_config;
            apply_config_file(from_config, config_file);
            // the config file supplies whatever the flags left unset
            if (opt.courses.empty()) opt.courses = from_config.courses;
            if (opt.courses_dir.empty()) opt.courses_dir = from_config.courses_dir;
            if (opt.out == ".") opt.out = from_config.out;
            if (opt.taxonomy_path.empty()) opt.taxonomy_path = from_config.taxonomy_path;
        }
        collect_explicit_courses(opt, codes, logs, marks);
        if (!formats_csv.empty()) {
            opt.formats.clear();
            std::istringstream in(formats_csv);
            std::string fmt;
            while (std::getline(in, fmt, ',')) {
                if (fmt != "csv" && fmt != "markdown") throw UserError("unknown format '" + fmt + "'");
                opt.formats.push_back(fmt);
            }
        }

        if (app.got_subcommand(ingest)) return cmd_ingest(opt);
        if (app.got_subcommand(featurize)) return cmd_featurize(opt);
        if (app.got_subcommand(eval)) return cmd_eval_transfer(opt);
        if (app.got_subcommand(synth)) return cmd_synth(opt, spec_files);
        if (app.got_subcommand(render)) {
            return cmd_render_tree(opt, dataset_file, model_file, save_model);
        }
        return kExitUserError;
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
}
