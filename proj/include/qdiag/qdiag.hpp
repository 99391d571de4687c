// qdiag.hpp
// Umbrella header.

#pragma once

#include "analysis.hpp"
#include "criteria.hpp"
#include "qmat.hpp"
#include "record.hpp"
#include "states.hpp"
