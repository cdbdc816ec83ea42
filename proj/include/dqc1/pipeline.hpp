#pragma once

#include <vector>

#include "dqc1/datasets.hpp"
#include "dqc1/svm.hpp"

namespace dqc1 {

struct ClassificationResult {
    KernelMatrix train_kernel;
    SvmModel model;
    std::vector<int> predictions;
    std::vector<double> margins;
    double test_accuracy = 0.0;
};

/// Full kernel -> (repair) -> train -> predict pass over one train/test split.
inline ClassificationResult run_classification(const LabeledDataset& train,
                                               const LabeledDataset& test,
                                               const Dqc1Config& cfg,
                                               const FeatureMapConfig& fm, double svm_c) {
    ClassificationResult res;
    res.train_kernel = psd_repair(build_kernel_matrix(train.points, cfg, fm));
    res.model = svm_train(res.train_kernel, train.labels, svm_c, train.points);

    const RealMatrix rows = build_kernel_rows(test.points, train.points, cfg, fm);
    res.margins = decision_margins(res.model, rows);
    res.predictions.reserve(res.margins.size());
    for (double m : res.margins) res.predictions.push_back(m >= 0.0 ? 1 : -1);
    res.test_accuracy = accuracy(res.predictions, test.labels);
    return res;
}

}  // namespace dqc1
