#pragma once

#include "seqbench/backend.hpp"
#include "seqbench/cpu_stat.hpp"
#include "seqbench/disk_model.hpp"
#include "seqbench/engine.hpp"
#include "seqbench/filegen.hpp"
#include "seqbench/flow.hpp"
#include "seqbench/stripe.hpp"
#include "seqbench/svg.hpp"
#include "seqbench/sweep.hpp"
#include "seqbench/topology.hpp"
#include "seqbench/units.hpp"
