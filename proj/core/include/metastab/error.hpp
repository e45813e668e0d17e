#pragma once

#include <stdexcept>
#include <string>

namespace metastab {

enum class Errc {
  InvalidArgument,
  NTooLarge,
  FewerThanThreeRoots,
  DeltaTooLarge,
  EpsTooLarge,
  SolverError,
  InvalidFlow,
  AllTimedOut,
  TooFewReplicas,
  IoError,
  ConfigError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(Errc::InvalidArgument, what);
}

}  // namespace metastab
