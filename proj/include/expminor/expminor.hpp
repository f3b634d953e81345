#pragma once

#include "expminor/rational.hpp"
#include "expminor/rng.hpp"
#include "expminor/graph.hpp"
#include "expminor/spectral.hpp"
#include "expminor/partition.hpp"
#include "expminor/flow_routing.hpp"
#include "expminor/disjoint_paths.hpp"
#include "expminor/minor_model.hpp"
#include "expminor/generators.hpp"
#include "expminor/embed.hpp"
#include "expminor/commands.hpp"
