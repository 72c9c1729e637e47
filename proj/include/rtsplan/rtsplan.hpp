#pragma once

// Umbrella header for the simulation, planning and evaluation stack. The
// HTTP planner transport lives in llm_client.hpp and is included separately
// by binaries that talk to a live endpoint.

#include "rtsplan/action.hpp"
#include "rtsplan/bots.hpp"
#include "rtsplan/engine.hpp"
#include "rtsplan/executor.hpp"
#include "rtsplan/harness.hpp"
#include "rtsplan/map.hpp"
#include "rtsplan/observation.hpp"
#include "rtsplan/path.hpp"
#include "rtsplan/planner.hpp"
#include "rtsplan/replay.hpp"
#include "rtsplan/skills.hpp"
#include "rtsplan/state.hpp"
#include "rtsplan/stats.hpp"
#include "rtsplan/types.hpp"
