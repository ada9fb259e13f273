#pragma once

#include <stdexcept>
#include <string>

namespace momdec {

/// Requested moment order exceeds the configured weight cap.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A moment expression referenced a partition with no supplied value.
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

/// The Wishart moment map is singular for the given dimensions.
class degeneracy_error : public std::runtime_error {
 public:
  explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace momdec
