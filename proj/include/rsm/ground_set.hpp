#pragma once

#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace rsm {

/// Indexed ground set {0, ..., n-1} with optional unique element labels
/// (e.g. "e(u,v)" for graph edges).
class GroundSet {
 public:
  explicit GroundSet(int n, std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (n_ <= 0) throw std::invalid_argument("GroundSet: size must be positive");
    if (!labels_.empty()) {
      if (static_cast<int>(labels_.size()) != n_)
        throw std::invalid_argument("GroundSet: label count must equal size");
      std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
      if (static_cast<int>(seen.size()) != n_)
        throw std::invalid_argument("GroundSet: labels must be unique");
    }
  }

  int size() const { return n_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(int i) const { return labels_.at(i); }

 private:
  int n_;
  std::vector<std::string> labels_;
};

}  // namespace rsm
