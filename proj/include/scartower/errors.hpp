#pragma once

#include <stdexcept>
#include <string>

namespace scartower {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SiteOutOfGraph : Error {
  using Error::Error;
};

struct DimensionCapExceeded : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// A site set spans more than one connected component, so its diameter
/// is undefined.
struct DisconnectedSupport : Error {
  using Error::Error;
};

struct DisconnectedGraph : Error {
  using Error::Error;
};

struct InvalidParticleNumber : Error {
  using Error::Error;
};

struct SubsetTooLarge : Error {
  using Error::Error;
};

/// (Q^dag)^p |vac> vanished before reaching the requested p.  Carries the
/// largest p for which the tower state is nonzero.
struct TowerTruncated : Error {
  TowerTruncated(const std::string& msg, int max_p_) : Error(msg), max_p(max_p_) {}
  int max_p;
};

struct PackingInsufficient : Error {
  PackingInsufficient(const std::string& msg, int achieved_) : Error(msg), achieved(achieved_) {}
  int achieved;
};

struct ClassConditionViolated : Error {
  using Error::Error;
};

struct ConeTooLarge : Error {
  using Error::Error;
};

struct NonRealEnergies : Error {
  using Error::Error;
};

}  // namespace scartower
