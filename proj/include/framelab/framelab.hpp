#pragma once

// Umbrella header for the framelab frame-analysis toolkit.

#include "framelab/combinatorics.hpp"
#include "framelab/constructors.hpp"
#include "framelab/errors.hpp"
#include "framelab/frame.hpp"
#include "framelab/io.hpp"
#include "framelab/measures.hpp"
#include "framelab/optimize.hpp"
#include "framelab/report.hpp"
#include "framelab/rng.hpp"
#include "framelab/verify.hpp"
#include "framelab/version.hpp"
