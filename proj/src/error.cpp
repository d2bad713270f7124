#include "ado/error.hpp"

namespace ado {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "E_USAGE";
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::io: return "E_IO";
    case ErrorCode::config: return "E_CONFIG";
    case ErrorCode::dimension: return "E_DIMENSION";
    case ErrorCode::domain: return "E_DOMAIN";
    case ErrorCode::fit: return "E_FIT";
    case ErrorCode::run: return "E_RUN";
  }
  return "E_UNKNOWN";
}

}  // namespace ado
