#pragma once

// Pedestrian dead reckoning with corner-point map matching: IMU log
// ingestion, step-and-heading trajectory propagation, turn-to-corner
// trajectory correction, error metrics, and a synthetic walk generator.

#include "pdrmm/errors.hpp"
#include "pdrmm/geometry.hpp"
#include "pdrmm/imu.hpp"
#include "pdrmm/match.hpp"
#include "pdrmm/metrics.hpp"
#include "pdrmm/pdr.hpp"
#include "pdrmm/route.hpp"
#include "pdrmm/sim.hpp"
#include "pdrmm/traj_io.hpp"
