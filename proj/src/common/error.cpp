#include "mmdd/error.hpp"

namespace mmdd {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::config: return "config";
    case ErrorCode::ingestion: return "ingestion";
    case ErrorCode::validation: return "validation";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::orchestration: return "orchestration";
    case ErrorCode::plotting: return "plotting";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace mmdd
