#include "norec/fingerprint.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <vector>

#include "overloaded.hpp"

namespace norec {

std::string_view finding_kind_name(FindingKind k) {
  switch (k) {
    case FindingKind::OptimizationBug: return "optimization";
    case FindingKind::ErrorBug: return "error";
    case FindingKind::CrashBug: return "crash";
    case FindingKind::Hang: return "hang";
  }
  return "?";
}

namespace {

void collect(const ExprPtr& e, std::vector<std::string>& out) {
  if (!e) return;
  std::visit(detail::overloaded{
                 [](const Constant&) {},
                 [](const ColumnRef&) {},
                 [&](const Unary& u) { out.emplace_back(op_name(u.op)); },
                 [&](const Binary& b) { out.emplace_back(op_name(b.op)); },
                 [&](const Between& b) { out.emplace_back(b.symmetric ? "between-symmetric" : "between"); },
                 [&](const InList&) { out.emplace_back("in"); },
                 [&](const FunctionCall& f) {
                   std::string n = f.name;
                   for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                   out.push_back("fn:" + n);
                 },
                 [&](const Cast& c) { out.push_back("cast"); (void)c; },
                 [&](const Collate& c) { out.push_back("collate:" + std::string(collation_name(c.collation))); },
                 [&](const PostfixIs& p) { out.emplace_back(is_kind_name(p.kind)); },
             },
             e->node);
  for (const auto& k : children(*e)) collect(k, out);
}

void collect_statement(const Statement& s, std::vector<std::string>& out) {
  out.push_back("stmt:" + std::string(statement_kind_name(kind_of(s))));
  std::visit(detail::overloaded{
                 [&](const CreateIndex& c) {
                   for (const auto& k : c.index.keys) collect(k, out);
                   collect(c.index.where, out);
                 },
                 [&](const Insert& i) {
                   for (const auto& r : i.rows) {
                     for (const auto& v : r) collect(v, out);
                   }
                 },
                 [&](const Update& u) {
                   for (const auto& a : u.assignments) collect(a.value, out);
                   collect(u.where, out);
                 },
                 [&](const Delete& d) { collect(d.where, out); },
                 [](const auto&) {},
             },
             s);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string operator_signature(const Finding& f) {
  std::vector<std::string> ops;
  const TestCase& tc = f.testCase;
  if (tc.query) {
    collect(tc.query->where, ops);
  } else if (!tc.setupStatements.empty()) {
    collect_statement(tc.setupStatements.back(), ops);
  }
  std::sort(ops.begin(), ops.end());
  std::string out;
  for (const auto& o : ops) {
    if (!out.empty()) out += ',';
    out += o;
  }
  return out;
}

std::string fingerprint(const Finding& f) {
  std::string key = std::string(finding_kind_name(f.kind));
  key += '|' + operator_signature(f);
  key += '|' + (f.kind == FindingKind::ErrorBug ? f.testCase.errorClass : std::string());
  key += '|' + f.injection;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return buf;
}

}  // namespace norec
