#pragma once

// Umbrella header: robust submodular minimization toolkit.

#include "rsm/affine_family.hpp"
#include "rsm/assignment.hpp"
#include "rsm/constraint.hpp"
#include "rsm/covering.hpp"
#include "rsm/element_set.hpp"
#include "rsm/graduated_assignment.hpp"
#include "rsm/graph.hpp"
#include "rsm/ground_set.hpp"
#include "rsm/harness.hpp"
#include "rsm/io.hpp"
#include "rsm/kmeans.hpp"
#include "rsm/lovasz.hpp"
#include "rsm/maxflow.hpp"
#include "rsm/modular_bounds.hpp"
#include "rsm/oracle.hpp"
#include "rsm/robust_instance.hpp"
#include "rsm/robust_modular.hpp"
#include "rsm/set_function.hpp"
#include "rsm/solvers.hpp"
