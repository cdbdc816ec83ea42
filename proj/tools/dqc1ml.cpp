// Command line driver for the DQC1 kernel-method simulator.
//
// Subcommands: generate, kernel, train, evaluate, sweep-alpha, reproduce.
// Every run writes a manifest.json echoing the fully resolved configuration,
// and all randomness flows from explicit seeds, so identical invocations
// produce identical files.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqc1/dqc1.hpp"
#include "dqc1/presets.hpp"
#include "dqc1/serialize.hpp"

namespace fs = std::filesystem;
using namespace dqc1;

namespace {

struct EngineFlags {
    double alpha = 1.0;
    std::string mode = "exact";
    long long shots = 8192;
    std::uint64_t seed = 0;
    double noise_p = 0.0;
    int layers = 2;

    Dqc1Config engine() const {
        Dqc1Config cfg;
        cfg.alpha = alpha;
        cfg.mode = mode_from_name(mode);
        cfg.shots = shots;
        cfg.seed = seed;
        cfg.depolarizing_p = noise_p;
        cfg.validate();
        return cfg;
    }

    FeatureMapConfig feature_map() const {
        FeatureMapConfig fm{2, layers};
        fm.validate();
        return fm;
    }
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
    cmd->add_option("--alpha", f.alpha, "Control-qubit polarization in [0, 1]")
        ->capture_default_str();
    cmd->add_option("--mode", f.mode, "Kernel estimation mode: exact or shots")
        ->check(CLI::IsMember({"exact", "shots"}))
        ->capture_default_str();
    cmd->add_option("--shots", f.shots, "Measurement shots per observable")
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Root seed for all derived streams")
        ->capture_default_str();
    cmd->add_option("--noise-p", f.noise_p, "Depolarizing strength on the control qubit")
        ->capture_default_str();
    cmd->add_option("--layers", f.layers, "Feature-map layer count")->capture_default_str();
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

Json engine_json(const EngineFlags& f) {
    Json j = to_json(f.engine());
    j["layers"] = f.layers;
    return j;
}

void write_manifest(const fs::path& dir, const std::string& command, const Json& config,
                    const std::vector<std::string>& outputs) {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["outputs"] = outputs;
    save_json(j, (dir / "manifest.json").string());
}

Json dataset_summary(const LabeledDataset& ds) {
    int pos = 0;
    for (int y : ds.labels) pos += (y == 1);
    Json j{{"name", ds.name},
           {"size", ds.size()},
           {"positive", pos},
           {"negative", static_cast<int>(ds.size()) - pos},
           {"seed", ds.seed}};
    if (ds.rescale) {
        j["rescale"] = {{"src_min", ds.rescale->src_min},
                        {"src_max", ds.rescale->src_max},
                        {"dst_lo", ds.rescale->dst_lo},
                        {"dst_hi", ds.rescale->dst_hi}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOpts {
    std::string dataset;
    std::string out = "out";
    std::uint64_t seed = 0;
    int train_per_label = presets::kAdhocTrainPerLabel;
    int test_per_label = presets::kAdhocTestPerLabel;
    double gap = kDefaultAdhocGap;
    int n_total = presets::kBenchmarkTotal;
    int train_total = presets::kBenchmarkTrain;
    int test_total = presets::kBenchmarkTest;
    double noise_std = -1.0;  // resolved per dataset
    double factor = kDefaultCirclesFactor;
    double feature_scale = kDefaultFeatureScale;
    int layers = 2;

    double resolved_noise() const {
        if (noise_std >= 0.0) return noise_std;
        return dataset == "moons" ? kDefaultMoonsNoise : kDefaultCirclesNoise;
    }
};

int cmd_generate(const GenerateOpts& o) {
    const fs::path dir = ensure_out_dir(o.out);
    LabeledDataset train, test;
    Json cfg{{"dataset", o.dataset}, {"seed", o.seed}};

    if (o.dataset == "adhoc") {
        const FeatureMapConfig fm{2, o.layers};
        const SplitSpec spec{o.train_per_label, o.test_per_label, o.seed};
        std::tie(train, test) = gen_adhoc(spec, o.gap, fm);
        cfg["train_per_label"] = o.train_per_label;
        cfg["test_per_label"] = o.test_per_label;
        cfg["gap"] = o.gap;
        cfg["layers"] = o.layers;
    } else if (o.dataset == "moons" || o.dataset == "circles") {
        const double noise = o.resolved_noise();
        LabeledDataset full = o.dataset == "moons"
                                  ? gen_moons(o.n_total, noise, o.seed, o.feature_scale)
                                  : gen_circles(o.n_total, o.factor, noise, o.seed, o.feature_scale);
        std::tie(train, test) = split_train_test(full, o.train_total, o.test_total, o.seed);
        cfg["n_total"] = o.n_total;
        cfg["train_total"] = o.train_total;
        cfg["test_total"] = o.test_total;
        cfg["noise_std"] = noise;
        cfg["feature_scale"] = o.feature_scale;
        if (o.dataset == "circles") cfg["factor"] = o.factor;
    } else {
        throw std::runtime_error("unknown dataset '" + o.dataset +
                                 "' (valid: adhoc, moons, circles)");
    }

    save_dataset(train, (dir / "train.csv").string());
    save_dataset(test, (dir / "test.csv").string());
    cfg["train_summary"] = dataset_summary(train);
    cfg["test_summary"] = dataset_summary(test);
    write_manifest(dir, "generate", cfg, {"train.csv", "test.csv"});

    std::cout << "dataset " << o.dataset << ": " << train.size() << " train / " << test.size()
              << " test points written to " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// kernel

int cmd_kernel(const std::string& data_path, const EngineFlags& ef, const std::string& out) {
    const fs::path dir = ensure_out_dir(out);
    const LabeledDataset ds = load_dataset(data_path);
    const Dqc1Config cfg = ef.engine();
    const FeatureMapConfig fm = ef.feature_map();

    const KernelMatrix k = build_kernel_matrix(ds.points, cfg, fm);
    save_matrix_csv(k.values, (dir / "kernel.csv").string());

    const auto records = resource_map(ds.points, cfg, fm);
    save_resource_csv(records, (dir / "resources.csv").string());

    Json config = engine_json(ef);
    config["data"] = data_path;
    config["dataset_summary"] = dataset_summary(ds);
    // Ideal register purities for the mixed-target preparation.
    config["target_purity_joint"] = purity(prepare_target_mixed_via_ancilla(2));
    config["target_purity_per_qubit"] =
        purity(partial_trace(prepare_target_mixed_via_ancilla(2), {2, 2}, {0}));
    write_manifest(dir, "kernel", config, {"kernel.csv", "resources.csv"});

    std::cout << "kernel " << k.size() << "x" << k.size() << " and " << records.size()
              << " resource records written to " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const std::string& data_path, const std::string& kernel_path, double svm_c,
              const EngineFlags& ef, const std::string& out) {
    const fs::path dir = ensure_out_dir(out);
    const LabeledDataset ds = load_dataset(data_path);
    const Dqc1Config cfg = ef.engine();
    const FeatureMapConfig fm = ef.feature_map();

    KernelMatrix k;
    if (!kernel_path.empty()) {
        k.values = load_matrix_csv(kernel_path);
        if (k.values.rows() != k.values.cols() ||
            k.values.rows() != static_cast<Eigen::Index>(ds.size()))
            throw std::runtime_error("kernel matrix shape does not match dataset size");
        k.mode = cfg.mode;
        k.alpha = cfg.alpha;
    } else {
        k = build_kernel_matrix(ds.points, cfg, fm);
    }
    k = psd_repair(k);

    const SvmModel model = svm_train(k, ds.labels, svm_c, ds.points);
    save_model_json({model, cfg, fm}, (dir / "model.json").string());

    Json config = engine_json(ef);
    config["data"] = data_path;
    config["svm_c"] = svm_c;
    config["kernel_file"] = kernel_path;
    config["psd_repaired"] = k.psd_repaired;
    config["converged"] = model.converged;
    int n_sv = 0;
    for (Eigen::Index i = 0; i < model.beta.size(); ++i)
        if (model.beta(i) > 1e-8 * std::max(1.0, svm_c)) ++n_sv;
    config["support_vectors"] = n_sv;
    write_manifest(dir, "train", config, {"model.json"});

    std::cout << "model with " << n_sv << " support vectors written to " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& kernel_path, const EngineFlags& ef, const CLI::App* cmd,
                 const std::string& out) {
    const fs::path dir = ensure_out_dir(out);
    const ModelFile mf = load_model_json(model_path);
    const LabeledDataset ds = load_dataset(data_path);

    // The model carries the configuration it was trained with; explicit flags
    // override it field by field.
    Dqc1Config cfg = mf.engine;
    FeatureMapConfig fm = mf.feature_map;
    if (cmd->count("--alpha")) cfg.alpha = ef.alpha;
    if (cmd->count("--mode")) cfg.mode = mode_from_name(ef.mode);
    if (cmd->count("--shots")) cfg.shots = ef.shots;
    if (cmd->count("--seed")) cfg.seed = ef.seed;
    if (cmd->count("--noise-p")) cfg.depolarizing_p = ef.noise_p;
    if (cmd->count("--layers")) fm.layers = ef.layers;
    cfg.validate();
    fm.validate();

    RealMatrix rows;
    if (!kernel_path.empty()) {
        rows = load_matrix_csv(kernel_path);
        if (rows.rows() != static_cast<Eigen::Index>(ds.size()) ||
            rows.cols() != static_cast<Eigen::Index>(mf.model.points.size()))
            throw std::runtime_error("kernel rows shape does not match model/dataset sizes");
    } else {
        if (mf.model.points.empty())
            throw std::runtime_error("model carries no training points; provide --kernel rows");
        rows = build_kernel_rows(ds.points, mf.model.points, cfg, fm);
    }

    const auto margins = decision_margins(mf.model, rows);
    std::vector<int> predictions;
    predictions.reserve(margins.size());
    for (double m : margins) predictions.push_back(m >= 0.0 ? 1 : -1);
    const double acc = accuracy(predictions, ds.labels);

    Json report;
    report["accuracy"] = acc;
    report["predictions"] = predictions;
    report["margins"] = margins;
    report["config"] = {{"model", model_path},
                        {"data", data_path},
                        {"kernel_file", kernel_path},
                        {"engine", to_json(cfg)},
                        {"feature_map", {{"l", fm.layers}, {"n", fm.n_qubits}}}};
    save_json(report, (dir / "report.json").string());
    write_manifest(dir, "evaluate", report["config"], {"report.json"});

    std::cout << "accuracy " << acc << " on " << ds.size() << " points; report written to "
              << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep-alpha

struct SweepOpts {
    std::string dataset = "adhoc";
    std::vector<double> alphas;
    int reps = 5;
    double svm_c = presets::kDefaultSvmC;
    GenerateOpts gen;
};

std::pair<LabeledDataset, LabeledDataset> make_split(const GenerateOpts& o, std::uint64_t seed,
                                                     int layers) {
    if (o.dataset == "adhoc")
        return gen_adhoc({o.train_per_label, o.test_per_label, seed}, o.gap, {2, layers});
    LabeledDataset full =
        o.dataset == "moons"
            ? gen_moons(o.n_total, o.resolved_noise(), seed, o.feature_scale)
            : gen_circles(o.n_total, o.factor, o.resolved_noise(), seed, o.feature_scale);
    return split_train_test(full, o.train_total, o.test_total, seed);
}

int cmd_sweep_alpha(const SweepOpts& o, const EngineFlags& ef, const std::string& out) {
    if (o.dataset != "adhoc" && o.dataset != "moons" && o.dataset != "circles")
        throw std::runtime_error("unknown dataset '" + o.dataset +
                                 "' (valid: adhoc, moons, circles)");
    std::vector<double> alphas = o.alphas;
    if (alphas.empty())
        alphas.assign(presets::kAlphaGridFine.begin(), presets::kAlphaGridFine.end());
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::runtime_error("alpha list entry " + std::to_string(a) + " outside [0, 1]");
    if (o.reps < 1) throw std::runtime_error("repetitions must be >= 1");

    const fs::path dir = ensure_out_dir(out);
    const FeatureMapConfig fm = ef.feature_map();

    std::ostringstream csv;
    csv << "alpha,mean_accuracy,std_accuracy\n";
    Json per_alpha = Json::array();
    for (double a : alphas) {
        std::vector<double> accs;
        for (int r = 0; r < o.reps; ++r) {
            const std::uint64_t seed = ef.seed + static_cast<std::uint64_t>(r);
            const auto [train, test] = make_split(o.gen, seed, ef.layers);
            Dqc1Config cfg = ef.engine();
            cfg.alpha = a;
            cfg.seed = seed;
            accs.push_back(run_classification(train, test, cfg, fm, o.svm_c).test_accuracy);
        }
        const double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / accs.size();
        double var = 0.0;
        for (double v : accs) var += (v - mean) * (v - mean);
        const double sd = accs.size() > 1 ? std::sqrt(var / (accs.size() - 1)) : 0.0;
        csv << detail::format_g17(a) << ',' << detail::format_g17(mean) << ','
            << detail::format_g17(sd) << '\n';
        per_alpha.push_back({{"alpha", a}, {"accuracies", accs}});
    }

    std::ofstream f(dir / "sweep.csv");
    f << csv.str();
    if (!f) throw std::runtime_error("cannot write sweep.csv");

    Json config = engine_json(ef);
    config["dataset"] = o.dataset;
    config["alphas"] = alphas;
    config["reps"] = o.reps;
    config["svm_c"] = o.svm_c;
    config["runs"] = per_alpha;
    write_manifest(dir, "sweep-alpha", config, {"sweep.csv"});

    std::cout << "alpha sweep over " << alphas.size() << " values x " << o.reps
              << " repetitions written to " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reproduce

int reproduce_classification(const fs::path& dir) {
    std::ostringstream csv;
    csv << "seed,accuracy_exact,accuracy_depolarized\n";
    Json runs = Json::array();
    const FeatureMapConfig fm{2, 2};
    for (std::uint64_t seed : presets::kAdhocSeeds) {
        const auto [train, test] =
            gen_adhoc({presets::kAdhocTrainPerLabel, presets::kAdhocTestPerLabel, seed},
                      kDefaultAdhocGap, fm);

        Dqc1Config exact;
        exact.seed = seed;
        const double acc =
            run_classification(train, test, exact, fm, presets::kDefaultSvmC).test_accuracy;

        Dqc1Config noisy;
        noisy.mode = SamplingMode::shots;
        noisy.shots = presets::kNoiseDemoShots;
        noisy.depolarizing_p = presets::kNoiseDemoP;
        noisy.seed = seed + presets::kNoiseDemoSeedOffset;
        const double acc_noisy =
            run_classification(train, test, noisy, fm, presets::kDefaultSvmC).test_accuracy;

        csv << seed << ',' << detail::format_g17(acc) << ',' << detail::format_g17(acc_noisy)
            << '\n';
        runs.push_back({{"seed", seed}, {"exact", acc}, {"depolarized", acc_noisy}});
    }
    std::ofstream f(dir / "accuracy.csv");
    f << csv.str();
    if (!f) throw std::runtime_error("cannot write accuracy.csv");
    Json config{{"experiment", "adhoc classification"},
                {"train_per_label", presets::kAdhocTrainPerLabel},
                {"test_per_label", presets::kAdhocTestPerLabel},
                {"noise_demo_p", presets::kNoiseDemoP},
                {"noise_demo_shots", presets::kNoiseDemoShots},
                {"runs", runs}};
    write_manifest(dir, "reproduce fig5", config, {"accuracy.csv"});
    std::cout << "adhoc classification summary written to " << dir.string() << "\n";
    return 0;
}

int reproduce_alpha_sweep(const fs::path& dir, const std::string& dataset,
                          const std::vector<double>& alphas, int reps, std::uint64_t seed) {
    SweepOpts o;
    o.dataset = dataset;
    o.alphas = alphas;
    o.reps = reps;
    o.gen.dataset = dataset;
    o.gen.seed = seed;
    EngineFlags ef;
    ef.seed = seed;
    return cmd_sweep_alpha(o, ef, dir.string());
}

// Adhoc alpha sweep over the frozen seed set rather than consecutive seeds.
int reproduce_adhoc_sweep(const fs::path& dir) {
    ensure_out_dir(dir.string());
    const FeatureMapConfig fm{2, 2};
    std::ostringstream csv;
    csv << "alpha,mean_accuracy,std_accuracy\n";
    for (double a : presets::kAlphaGridFine) {
        std::vector<double> accs;
        for (std::uint64_t seed : presets::kAdhocSeeds) {
            const auto [train, test] =
                gen_adhoc({presets::kAdhocTrainPerLabel, presets::kAdhocTestPerLabel, seed},
                          kDefaultAdhocGap, fm);
            Dqc1Config cfg;
            cfg.alpha = a;
            cfg.seed = seed;
            accs.push_back(run_classification(train, test, cfg, fm, presets::kDefaultSvmC)
                               .test_accuracy);
        }
        const double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / accs.size();
        double var = 0.0;
        for (double v : accs) var += (v - mean) * (v - mean);
        csv << detail::format_g17(a) << ',' << detail::format_g17(mean) << ','
            << detail::format_g17(std::sqrt(var / (accs.size() - 1))) << '\n';
    }
    std::ofstream f(dir / "sweep.csv");
    f << csv.str();
    if (!f) throw std::runtime_error("cannot write sweep.csv");
    Json config{{"experiment", "adhoc alpha sweep"},
                {"alphas", presets::kAlphaGridFine},
                {"seeds", presets::kAdhocSeeds}};
    write_manifest(dir, "reproduce fig6", config, {"sweep.csv"});
    std::cout << "adhoc alpha sweep written to " << dir.string() << "\n";
    return 0;
}

int reproduce_maps(const fs::path& dir) {
    const auto [train, test] =
        gen_adhoc({presets::kAdhocTrainPerLabel, presets::kAdhocTestPerLabel,
                   presets::kAdhocSeeds[0]},
                  kDefaultAdhocGap, {2, 2});
    (void)test;
    EngineFlags ef;
    ef.seed = presets::kAdhocSeeds[0];
    const fs::path data = dir / "train.csv";
    save_dataset(train, data.string());
    return cmd_kernel(data.string(), ef, dir.string());
}

int cmd_reproduce(const std::string& figure, const std::string& out) {
    const fs::path dir = ensure_out_dir((fs::path(out) / figure).string());
    if (figure == "fig5") return reproduce_classification(dir);
    if (figure == "fig6") return reproduce_adhoc_sweep(dir);
    if (figure == "fig7") {
        const std::vector<double> alphas{presets::kAlphaGridCoarse.begin(),
                                         presets::kAlphaGridCoarse.end()};
        const int rc = reproduce_alpha_sweep((dir / "moons"), "moons", alphas, 1,
                                             presets::kBenchmarkSeed);
        if (rc) return rc;
        return reproduce_alpha_sweep((dir / "circles"), "circles", alphas, 1,
                                     presets::kBenchmarkSeed);
    }
    if (figure == "fig8" || figure == "fig9" || figure == "fig10") {
        // One kernel/resource run serves all three maps: kernel.csv holds the
        // Gram matrix, resources.csv the coherence and discord columns.
        return reproduce_maps(dir);
    }
    throw std::runtime_error("unknown figure '" + figure +
                             "' (valid: fig5, fig6, fig7, fig8, fig9, fig10)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DQC1 kernel-method simulator"};
    app.require_subcommand(1);

    // generate
    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "Generate a benchmark dataset");
    g->add_option("--dataset", gen.dataset, "adhoc, moons, or circles")->required();
    g->add_option("--out", gen.out, "Output directory")->capture_default_str();
    g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    g->add_option("--train", gen.train_per_label, "Training points per label (adhoc)")
        ->capture_default_str();
    g->add_option("--test", gen.test_per_label, "Test points per label (adhoc)")
        ->capture_default_str();
    g->add_option("--gap", gen.gap, "Rejection gap (adhoc)")->capture_default_str();
    g->add_option("--n", gen.n_total, "Total points (moons/circles)")->capture_default_str();
    g->add_option("--train-total", gen.train_total, "Training split size (moons/circles)")
        ->capture_default_str();
    g->add_option("--test-total", gen.test_total, "Test split size (moons/circles)")
        ->capture_default_str();
    g->add_option("--noise-std", gen.noise_std, "Gaussian feature noise (moons/circles)");
    g->add_option("--factor", gen.factor, "Inner radius (circles)")->capture_default_str();
    g->add_option("--feature-scale", gen.feature_scale, "Rescale target range width")
        ->capture_default_str();
    g->add_option("--layers", gen.layers, "Feature-map layers (adhoc labeling)")
        ->capture_default_str();

    // kernel
    EngineFlags kernel_ef;
    std::string kernel_data, kernel_out = "out";
    auto* k = app.add_subcommand("kernel", "Kernel matrix and resource records");
    k->add_option("--data", kernel_data, "Dataset CSV")->required();
    k->add_option("--out", kernel_out, "Output directory")->capture_default_str();
    add_engine_flags(k, kernel_ef);

    // train
    EngineFlags train_ef;
    std::string train_data, train_kernel, train_out = "out";
    double train_c = presets::kDefaultSvmC;
    auto* t = app.add_subcommand("train", "Train the kernel SVM");
    t->add_option("--data", train_data, "Training dataset CSV")->required();
    t->add_option("--kernel", train_kernel, "Precomputed kernel CSV (optional)");
    t->add_option("--svm-c", train_c, "Soft-margin box constraint")->capture_default_str();
    t->add_option("--out", train_out, "Output directory")->capture_default_str();
    add_engine_flags(t, train_ef);

    // evaluate
    EngineFlags eval_ef;
    std::string eval_model, eval_data, eval_kernel, eval_out = "out";
    auto* e = app.add_subcommand("evaluate", "Evaluate a trained model");
    e->add_option("--model", eval_model, "Model JSON")->required();
    e->add_option("--data", eval_data, "Test dataset CSV")->required();
    e->add_option("--kernel", eval_kernel, "Precomputed kernel rows CSV (optional)");
    e->add_option("--out", eval_out, "Output directory")->capture_default_str();
    add_engine_flags(e, eval_ef);

    // sweep-alpha
    SweepOpts sweep;
    EngineFlags sweep_ef;
    std::string sweep_out = "out";
    std::string alphas_arg;
    auto* s = app.add_subcommand("sweep-alpha", "Accuracy as a function of alpha");
    s->add_option("--dataset", sweep.dataset, "adhoc, moons, or circles")->capture_default_str();
    s->add_option("--alphas", alphas_arg, "Comma-separated alpha list");
    s->add_option("--reps", sweep.reps, "Repetitions per alpha")->capture_default_str();
    s->add_option("--svm-c", sweep.svm_c, "Soft-margin box constraint")->capture_default_str();
    s->add_option("--out", sweep_out, "Output directory")->capture_default_str();
    s->add_option("--train", sweep.gen.train_per_label, "Training points per label (adhoc)")
        ->capture_default_str();
    s->add_option("--test", sweep.gen.test_per_label, "Test points per label (adhoc)")
        ->capture_default_str();
    s->add_option("--gap", sweep.gen.gap, "Rejection gap (adhoc)")->capture_default_str();
    s->add_option("--n", sweep.gen.n_total, "Total points (moons/circles)")
        ->capture_default_str();
    s->add_option("--train-total", sweep.gen.train_total, "Training split (moons/circles)")
        ->capture_default_str();
    s->add_option("--test-total", sweep.gen.test_total, "Test split (moons/circles)")
        ->capture_default_str();
    s->add_option("--noise-std", sweep.gen.noise_std, "Gaussian feature noise (moons/circles)");
    s->add_option("--factor", sweep.gen.factor, "Inner radius (circles)")->capture_default_str();
    add_engine_flags(s, sweep_ef);

    // reproduce
    std::string figure, repro_out = "out";
    auto* r = app.add_subcommand("reproduce", "Run a frozen experiment preset");
    r->add_option("figure", figure, "fig5, fig6, fig7, fig8, fig9, or fig10")->required();
    r->add_option("--out", repro_out, "Output directory")->capture_default_str();

    // Flags beat config-file values, which beat the built-in defaults.
    for (CLI::App* sub : {g, k, t, e, s, r}) sub->set_config("--config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g) return cmd_generate(gen);
        if (*k) return cmd_kernel(kernel_data, kernel_ef, kernel_out);
        if (*t) return cmd_train(train_data, train_kernel, train_c, train_ef, train_out);
        if (*e) return cmd_evaluate(eval_model, eval_data, eval_kernel, eval_ef, e, eval_out);
        if (*s) {
            if (!alphas_arg.empty()) {
                std::istringstream ss(alphas_arg);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    sweep.alphas.push_back(std::stod(tok));
            }
            sweep.gen.dataset = sweep.dataset;
            sweep.gen.seed = sweep_ef.seed;
            return cmd_sweep_alpha(sweep, sweep_ef, sweep_out);
        }
        if (*r) return cmd_reproduce(figure, repro_out);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << std::endl;
        return 1;
    }
    return 0;
}
