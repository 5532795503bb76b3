#pragma once

#include <stdexcept>
#include <utility>

#include "rsm/constraint.hpp"
#include "rsm/set_function.hpp"

namespace rsm {

/// A Robust-SubMin instance: minimize max_i f_i(X) over X in C.
struct RobustInstance {
  RobustObjective objective;
  Constraint constraint;

  RobustInstance(RobustObjective obj, Constraint con)
      : objective(std::move(obj)), constraint(std::move(con)) {
    if (objective.ground_size() != constraint.ground_size())
      throw std::invalid_argument("RobustInstance: objective/constraint ground sets differ");
  }
};

}  // namespace rsm
