#pragma once

/// @file riskforge.hpp
/// Umbrella header.

#include "analysis.hpp"
#include "core_model.hpp"
#include "model_io.hpp"
#include "oracle.hpp"
#include "rating.hpp"
#include "reports.hpp"
#include "validation.hpp"
