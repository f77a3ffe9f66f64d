#pragma once

#include "hhc/bounds.hpp"
#include "hhc/convexity.hpp"
#include "hhc/error.hpp"
#include "hhc/oracle.hpp"
#include "hhc/quadrature.hpp"
#include "hhc/surfaces.hpp"
#include "hhc/types.hpp"
