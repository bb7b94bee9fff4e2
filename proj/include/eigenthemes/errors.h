#ifndef EIGENTHEMES_ERRORS_H_
#define EIGENTHEMES_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eigenthemes {

enum class ErrorKind {
  kIo,
  kParse,
  kIntegrity,
  kFormat,
  kData,
  kDimension,
  kNumerical,
  kEmptyDocument,
  kDomain,
  kUndefinedInput,
  kConfig,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception; the kind drives
// the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eigenthemes

#endif  // EIGENTHEMES_ERRORS_H_
