#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqc1/datasets.hpp"
#include "dqc1/engine.hpp"
#include "dqc1/resources.hpp"
#include "dqc1/svm.hpp"

namespace dqc1 {

using Json = nlohmann::json;

inline std::string mode_name(SamplingMode m) {
    return m == SamplingMode::exact ? "exact" : "shots";
}

inline SamplingMode mode_from_name(const std::string& s) {
    if (s == "exact") return SamplingMode::exact;
    if (s == "shots") return SamplingMode::shots;
    throw std::invalid_argument("unknown sampling mode: " + s);
}

/// Square or rectangular matrix as bare comma-separated rows, no header.
inline void save_matrix_csv(const RealMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_matrix_csv: cannot open " + path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << detail::format_g17(m(i, j));
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_matrix_csv: write failed for " + path);
}

inline RealMatrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_matrix_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("load_matrix_csv: bad value at line " +
                                         std::to_string(line_no) + " in " + path);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("load_matrix_csv: ragged row at line " +
                                     std::to_string(line_no) + " in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("load_matrix_csv: empty matrix in " + path);
    RealMatrix m(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

inline void save_resource_csv(const std::vector<ResourceRecord>& records,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_resource_csv: cannot open " + path);
    out << "i,j,kernel_abs,delta_coherence,geometric_discord,bound_ok\n";
    for (const auto& r : records)
        out << r.i << ',' << r.j << ',' << detail::format_g17(r.kernel_abs) << ','
            << detail::format_g17(r.delta_coherence) << ','
            << detail::format_g17(r.geometric_discord) << ','
            << (r.bound_satisfied ? "true" : "false") << '\n';
    if (!out) throw std::runtime_error("save_resource_csv: write failed for " + path);
}

/// Model document bundling the trained SVM with the engine and feature-map
/// configuration needed to evaluate kernel rows for new points.
struct ModelFile {
    SvmModel model;
    Dqc1Config engine;
    FeatureMapConfig feature_map;
};

inline Json to_json(const Dqc1Config& cfg) {
    return Json{{"n_target_qubits", cfg.n_target_qubits},
                {"alpha", cfg.alpha},
                {"mode", mode_name(cfg.mode)},
                {"shots", cfg.shots},
                {"seed", cfg.seed},
                {"noise_p", cfg.depolarizing_p}};
}

inline Dqc1Config dqc1_config_from_json(const Json& j) {
    Dqc1Config cfg;
    cfg.n_target_qubits = j.at("n_target_qubits").get<int>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    cfg.shots = j.at("shots").get<long long>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.depolarizing_p = j.at("noise_p").get<double>();
    cfg.validate();
    return cfg;
}

inline void save_model_json(const ModelFile& mf, const std::string& path) {
    Json j;
    j["beta"] = std::vector<double>(mf.model.beta.data(), mf.model.beta.data() + mf.model.beta.size());
    j["bias"] = mf.model.bias;
    j["C"] = mf.model.c;
    j["labels"] = mf.model.labels;
    Json pts = Json::array();
    for (const auto& p : mf.model.points) pts.push_back({p[0], p[1]});
    j["points"] = pts;
    j["alpha"] = mf.engine.alpha;
    j["mode"] = mode_name(mf.engine.mode);
    j["shots"] = mf.engine.shots;
    j["seed"] = mf.engine.seed;
    j["noise_p"] = mf.engine.depolarizing_p;
    j["feature_map"] = {{"l", mf.feature_map.layers}, {"n", mf.feature_map.n_qubits}};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

inline ModelFile load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model_json: cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("load_model_json: invalid JSON in " + path + ": " + e.what());
    }

    ModelFile mf;
    const auto beta = j.at("beta").get<std::vector<double>>();
    mf.model.beta = Eigen::Map<const RealVector>(beta.data(), static_cast<Eigen::Index>(beta.size()));
    mf.model.bias = j.at("bias").get<double>();
    mf.model.c = j.at("C").get<double>();
    mf.model.labels = j.at("labels").get<std::vector<int>>();
    for (const auto& p : j.at("points")) mf.model.points.push_back({p.at(0), p.at(1)});
    mf.engine.alpha = j.at("alpha").get<double>();
    mf.engine.mode = mode_from_name(j.at("mode").get<std::string>());
    mf.engine.shots = j.value("shots", 8192LL);
    mf.engine.seed = j.at("seed").get<std::uint64_t>();
    mf.engine.depolarizing_p = j.value("noise_p", 0.0);
    mf.feature_map.layers = j.at("feature_map").at("l").get<int>();
    mf.feature_map.n_qubits = j.at("feature_map").at("n").get<int>();
    mf.engine.n_target_qubits = mf.feature_map.n_qubits;

    if (mf.model.labels.size() != mf.model.points.size() ||
        static_cast<Eigen::Index>(mf.model.labels.size()) != mf.model.beta.size())
        throw std::runtime_error("load_model_json: inconsistent beta/labels/points in " + path);
    mf.engine.validate();
    mf.feature_map.validate();
    return mf;
}

inline void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace dqc1
