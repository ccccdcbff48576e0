#pragma once

// Umbrella header for the carplan library: time-optimal kinematic-car path
// planning by sweeping the travel-time PDE on a configuration grid.

#include "carplan/csv.hpp"
#include "carplan/errors.hpp"
#include "carplan/field_io.hpp"
#include "carplan/geometry.hpp"
#include "carplan/grid.hpp"
#include "carplan/oracle.hpp"
#include "carplan/scene.hpp"
#include "carplan/solver.hpp"
#include "carplan/svg.hpp"
#include "carplan/trajectory.hpp"
