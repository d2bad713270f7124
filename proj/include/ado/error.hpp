#pragma once

#include <stdexcept>
#include <string>

namespace ado {

// Machine-parsable error codes; the CLI prints them as error[<code>]: <msg>.
enum class ErrorCode {
  usage,
  parse,
  io,
  config,
  dimension,
  domain,
  fit,
  run,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ado
