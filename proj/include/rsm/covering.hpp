#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsm/element_set.hpp"

namespace rsm {

/// One covering inequality: sum_{i in W} x_i >= b_W.
struct CoveringMember {
  ElementSet support;  // W
  int requirement = 1;  // b_W
};

/// Up-monotone covering polytope {x in [0,1]^n : x(W) >= b_W for all W}.
/// Small families are explicit; the exponential ones (paths, cuts, matroid
/// rank) live behind a most-violated separation oracle.
class CoveringFamily {
 public:
  static constexpr double kDefaultTol = 1e-7;

  using SeparationOracle =
      std::function<std::optional<CoveringMember>(const std::vector<double>&, double)>;

  CoveringFamily(int ground_size, std::vector<CoveringMember> members)
      : n_(ground_size), members_(std::move(members)) {
    for (const CoveringMember& m : members_) {
      if (static_cast<int>(m.support.size()) != n_)
        throw std::invalid_argument("CoveringFamily: member support size mismatch");
      if (m.requirement < 1 || m.requirement > static_cast<int>(m.support.count()))
        throw std::invalid_argument("CoveringFamily: requirement must lie in [1, |W|]");
    }
  }

  CoveringFamily(int ground_size, SeparationOracle oracle, double rounding_factor)
      : n_(ground_size), oracle_(std::move(oracle)), oracle_factor_(rounding_factor) {}

  int ground_size() const { return n_; }
  bool is_explicit() const { return !oracle_; }

  const std::vector<CoveringMember>& members() const {
    if (!is_explicit()) throw std::logic_error("CoveringFamily: family is oracle-backed");
    return members_;
  }

  /// A member violated by more than tol (the most violated one), or nullopt
  /// when x satisfies every inequality within tol.
  std::optional<CoveringMember> separate(const std::vector<double>& x,
                                         double tol = kDefaultTol) const {
    if (static_cast<int>(x.size()) != n_)
      throw std::invalid_argument("CoveringFamily: point dimension mismatch");
    if (oracle_) return oracle_(x, tol);
    double worst = tol;
    const CoveringMember* pick = nullptr;
    for (const CoveringMember& m : members_) {
      double mass = 0.0;
      for (auto i = m.support.find_first(); i != ElementSet::npos; i = m.support.find_next(i))
        mass += x[i];
      double violation = static_cast<double>(m.requirement) - mass;
      if (violation > worst) {
        worst = violation;
        pick = &m;
      }
    }
    if (!pick) return std::nullopt;
    return *pick;
  }

  /// max_W |W| - b_W + 1: the chain-rounding guarantee. For oracle-backed
  /// families this is the documented worst case, not a scan.
  double rounding_factor() const {
    if (oracle_) return oracle_factor_;
    double factor = 1.0;
    for (const CoveringMember& m : members_)
      factor = std::max(factor,
                        static_cast<double>(m.support.count()) - m.requirement + 1.0);
    return factor;
  }

 private:
  int n_;
  std::vector<CoveringMember> members_;
  SeparationOracle oracle_;
  double oracle_factor_ = 0.0;
};

inline std::optional<CoveringMember> separate(const CoveringFamily& family,
                                              const std::vector<double>& x,
                                              double tol = CoveringFamily::kDefaultTol) {
  return family.separate(x, tol);
}

}  // namespace rsm
