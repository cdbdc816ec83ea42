#pragma once

// Umbrella header for the DQC1 kernel-method simulator.

#include "dqc1/linalg.hpp"
#include "dqc1/entropy.hpp"
#include "dqc1/rng.hpp"
#include "dqc1/feature_map.hpp"
#include "dqc1/engine.hpp"
#include "dqc1/resources.hpp"
#include "dqc1/svm.hpp"
#include "dqc1/datasets.hpp"
#include "dqc1/pipeline.hpp"
