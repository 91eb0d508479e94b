#include "norec/testcase.hpp"

#include <cctype>

#include "norec/dialect.hpp"

namespace norec {

std::string_view verdict_class_name(VerdictClass v) {
  switch (v) {
    case VerdictClass::Discrepancy: return "discrepancy";
    case VerdictClass::UnexpectedError: return "unexpected-error";
    case VerdictClass::Crash: return "crash";
  }
  return "?";
}

std::optional<VerdictClass> parse_verdict_class(std::string_view name) {
  for (auto v : {VerdictClass::Discrepancy, VerdictClass::UnexpectedError, VerdictClass::Crash}) {
    if (verdict_class_name(v) == name) return v;
  }
  return std::nullopt;
}

std::string error_class(std::string_view message) {
  std::string out;
  bool in_token = false;
  for (size_t i = 0; i < message.size(); ++i) {
    char c = message[i];
    if (c == '\'' || c == '"') {
      size_t end = message.find(c, i + 1);
      out += "?";
      i = end == std::string_view::npos ? message.size() : end;
      in_token = false;
      continue;
    }
    auto u = static_cast<unsigned char>(c);
    bool word = std::isalnum(u) || c == '_' || c == '.';
    if (!word) {
      out += c;
      in_token = false;
      continue;
    }
    // Keep plain lower-case words; collapse anything carrying digits or dots.
    size_t j = i;
    bool plain = true;
    while (j < message.size()) {
      auto w = static_cast<unsigned char>(message[j]);
      if (!(std::isalnum(w) || message[j] == '_' || message[j] == '.')) break;
      if (std::isdigit(w) || message[j] == '.') plain = false;
      ++j;
    }
    if (!in_token) out += plain ? std::string(message.substr(i, j - i)) : "?";
    in_token = true;
    i = j - 1;
  }
  return out;
}

ReplayOutcome replay(const TestCase& tc, const ExecutorFactory& factory) {
  ReplayOutcome out;
  auto engine = factory();
  const DialectProfile& d = engine->dialect();
  for (size_t i = 0; i < tc.setupStatements.size(); ++i) {
    const auto& stmt = tc.setupStatements[i];
    EngineResult r = engine->execute(stmt);
    if (r.is_crash()) {
      out.observed = VerdictClass::Crash;
      out.failingStatement = i;
      out.message = r.message;
      return out;
    }
    if (r.is_error() && !d.match_expected_error(kind_of(stmt), r.message)) {
      out.observed = VerdictClass::UnexpectedError;
      out.errorClass = error_class(r.message);
      out.failingStatement = i;
      out.message = r.message;
      return out;
    }
  }
  if (!tc.query) return out;
  CheckResult c = tc.contentMode ? run_content_check(*engine, *tc.query, d, tc.seed)
                                 : run_check(*engine, *tc.query, tc.strategy, d, tc.seed);
  out.check = c;
  if (c.fault) {
    out.message = c.fault->message;
    if (c.fault->kind == EngineFault::Kind::Crash) {
      out.observed = VerdictClass::Crash;
    } else {
      out.observed = VerdictClass::UnexpectedError;
      out.errorClass = error_class(c.fault->message);
    }
  } else if (c.verdict && c.verdict->discrepancy()) {
    out.observed = VerdictClass::Discrepancy;
  }
  return out;
}

bool reproduces(const TestCase& tc, const ReplayOutcome& o) {
  if (o.observed != tc.verdictClass) return false;
  if (tc.verdictClass == VerdictClass::UnexpectedError) return o.errorClass == tc.errorClass;
  return true;
}

bool reproduces(const TestCase& tc, const ExecutorFactory& factory) {
  return reproduces(tc, replay(tc, factory));
}

}  // namespace norec
