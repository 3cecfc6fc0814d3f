#pragma once

#include "alphavol/alpha_hull.hpp"
#include "alphavol/convex_hull.hpp"
#include "alphavol/domain_spec.hpp"
#include "alphavol/domains.hpp"
#include "alphavol/estimators.hpp"
#include "alphavol/geom.hpp"
#include "alphavol/grid_index.hpp"
#include "alphavol/numeric.hpp"
#include "alphavol/predicates.hpp"
#include "alphavol/rng.hpp"
#include "alphavol/svg.hpp"
#include "alphavol/harness/config.hpp"
#include "alphavol/harness/experiments.hpp"
#include "alphavol/harness/io.hpp"
#include "alphavol/harness/parallel.hpp"
#include "alphavol/harness/plot.hpp"
#include "alphavol/harness/stats.hpp"
