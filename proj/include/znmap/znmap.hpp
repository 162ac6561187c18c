#pragma once

#include "geometry.hpp"
#include "maps.hpp"
#include "analysis.hpp"
#include "topology.hpp"
#include "poly2.hpp"
#include "singularity.hpp"
#include "verify.hpp"
