#pragma once

#include "tpcut/approx.hpp"
#include "tpcut/core.hpp"
#include "tpcut/covering_lp.hpp"
#include "tpcut/exact.hpp"
#include "tpcut/experiment.hpp"
#include "tpcut/generators.hpp"
#include "tpcut/gest.hpp"
#include "tpcut/graph.hpp"
#include "tpcut/io.hpp"
#include "tpcut/pathspace.hpp"
#include "tpcut/qos.hpp"
