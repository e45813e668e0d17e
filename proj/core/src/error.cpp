#include "metastab/error.hpp"

namespace metastab {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NTooLarge: return "NTooLarge";
    case Errc::FewerThanThreeRoots: return "FewerThanThreeRoots";
    case Errc::DeltaTooLarge: return "DeltaTooLarge";
    case Errc::EpsTooLarge: return "EpsTooLarge";
    case Errc::SolverError: return "SolverError";
    case Errc::InvalidFlow: return "InvalidFlow";
    case Errc::AllTimedOut: return "AllTimedOut";
    case Errc::TooFewReplicas: return "TooFewReplicas";
    case Errc::IoError: return "IoError";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace metastab
