#include "eigenthemes/errors.h"

namespace eigenthemes {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kIntegrity: return "integrity error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kEmptyDocument: return "empty document";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kUndefinedInput: return "undefined input";
    case ErrorKind::kConfig: return "config error";
  }
  return "error";
}

}  // namespace eigenthemes
