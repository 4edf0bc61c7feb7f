#ifndef WETTING_ERROR_HPP
#define WETTING_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wetting {

enum class Errc {
  InvalidArgument = 1,
  Parse,
  Io,
  ZeroMass,
  UncenteredPotential,
  DegenerateSupport,
  KernelTooShort,
  NegativeDelta,
  NotLocalized,
  KernelMassDeficit,
  InconsistentTables,
  ImpossibleExcursion,
  NotDelocalized,
  DomainError,
  TooLarge,
  Infeasible,
};

const char* errc_name(Errc code) noexcept;

// Every failure in the library is reported through this type; the C layer
// maps `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wetting

#endif
