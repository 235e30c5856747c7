#pragma once

// Single include for the whole library.

#include "hatg/common.hpp"
#include "hatg/graph.hpp"
#include "hatg/engine.hpp"
#include "hatg/adversary.hpp"
#include "hatg/constructive.hpp"
#include "hatg/strategy_io.hpp"
#include "hatg/synthesis.hpp"
#include "hatg/covering.hpp"
