#pragma once

#include "spa/commands.hpp"
#include "spa/experiment.hpp"
#include "spa/gcn.hpp"
#include "spa/graph.hpp"
#include "spa/kmedoids.hpp"
#include "spa/metrics.hpp"
#include "spa/pagerank.hpp"
#include "spa/scan.hpp"
#include "spa/selection.hpp"
#include "spa/synthetic.hpp"
#include "spa/types.hpp"
#include "spa/union_find.hpp"
