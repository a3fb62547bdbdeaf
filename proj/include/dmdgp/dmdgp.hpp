#pragma once

#include "dmdgp/bp_solver.hpp"
#include "dmdgp/errors.hpp"
#include "dmdgp/generators.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"
#include "dmdgp/instance_io.hpp"
#include "dmdgp/oracle.hpp"
#include "dmdgp/symmetry.hpp"
#include "dmdgp/tolerance.hpp"
#include "dmdgp/width_analyzer.hpp"
