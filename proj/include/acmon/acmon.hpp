#pragma once

#include "acmon/calibration.hpp"
#include "acmon/error.hpp"
#include "acmon/estimators.hpp"
#include "acmon/experiments.hpp"
#include "acmon/knn_index.hpp"
#include "acmon/models.hpp"
#include "acmon/monitor.hpp"
#include "acmon/parallel.hpp"
#include "acmon/pbdist.hpp"
#include "acmon/rng.hpp"
#include "acmon/synthdata.hpp"

namespace acmon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace acmon
