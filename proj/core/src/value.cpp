#include "sprw/value.hpp"

#include <charconv>
#include <cstdio>

namespace sprw {

bool operator<(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Value::Kind::Symbol: return a.as_symbol().name < b.as_symbol().name;
    case Value::Kind::Int: return a.as_int() < b.as_int();
    case Value::Kind::Float: return a.as_float() < b.as_float();
    case Value::Kind::Str: return a.as_str() < b.as_str();
    case Value::Kind::Bool: return a.as_bool() < b.as_bool();
  }
  return false;
}

namespace {

std::string format_float(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string out(buf, res.ptr);
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_source(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Symbol: return ":" + v.as_symbol().name;
    case Value::Kind::Int: return std::to_string(v.as_int());
    case Value::Kind::Float: return format_float(v.as_float());
    case Value::Kind::Str: return quote(v.as_str());
    case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
  }
  return {};
}

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Symbol: return "Symbol";
    case Value::Kind::Int: return "Int";
    case Value::Kind::Float: return "Float";
    case Value::Kind::Str: return "Str";
    case Value::Kind::Bool: return "Bool";
  }
  return "?";
}

}  // namespace sprw
