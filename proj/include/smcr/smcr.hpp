#pragma once
/**
 * @file    smcr.hpp
 * @brief   Umbrella header.
 */

#include <smcr/benchmark.hpp>
#include <smcr/errors.hpp>
#include <smcr/execution.hpp>
#include <smcr/geometry.hpp>
#include <smcr/io.hpp>
#include <smcr/label_set.hpp>
#include <smcr/planner.hpp>
#include <smcr/probability.hpp>
#include <smcr/random.hpp>
#include <smcr/reduction.hpp>
#include <smcr/roadmap.hpp>
#include <smcr/scenarios.hpp>
#include <smcr/scene.hpp>
