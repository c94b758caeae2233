#pragma once
// semnav.hpp - umbrella header.

#include "semnav/distance_field.hpp"
#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/global_map.hpp"
#include "semnav/global_planner.hpp"
#include "semnav/image_io.hpp"
#include "semnav/local_planner.hpp"
#include "semnav/metrics.hpp"
#include "semnav/occupancy_grid.hpp"
#include "semnav/outputs.hpp"
#include "semnav/perception.hpp"
#include "semnav/scenario.hpp"
#include "semnav/simulator.hpp"
#include "semnav/text.hpp"
#include "semnav/world.hpp"
