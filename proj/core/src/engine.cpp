#include "norec/engine.hpp"

namespace norec {

std::string_view status_name(EngineResult::Status s) {
  switch (s) {
    case EngineResult::Status::Rows: return "rows";
    case EngineResult::Status::Error: return "error";
    case EngineResult::Status::Crash: return "crash";
    case EngineResult::Status::Timeout: return "timeout";
  }
  return "?";
}

}  // namespace norec
