#ifndef ENNBO_ENNBO_HPP
#define ENNBO_ENNBO_HPP

#include "ennbo/benchmarks.hpp"
#include "ennbo/core.hpp"
#include "ennbo/enn.hpp"
#include "ennbo/harness.hpp"
#include "ennbo/optimizer.hpp"
#include "ennbo/pareto.hpp"
#include "ennbo/rng.hpp"
#include "ennbo/trust_region.hpp"

#endif
