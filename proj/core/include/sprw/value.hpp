#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace sprw {

using TimeMs = std::int64_t;
using MsgId = std::uint64_t;
using SeqNo = std::uint64_t;

/// An atom written `:name` in pattern text. Comparison is case-sensitive.
struct Symbol {
  std::string name;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Primitive attribute value. Equality is structural: an Int never equals a
/// Float, whatever their numeric values.
class Value {
 public:
  using Storage = std::variant<Symbol, std::int64_t, double, std::string, bool>;
  enum class Kind { Symbol = 0, Int, Float, Str, Bool };

  Value() : v_(std::int64_t{0}) {}
  Value(Symbol s) : v_(std::move(s)) {}
  Value(std::int64_t i) : v_(i) {}
  Value(int i) : v_(std::int64_t{i}) {}
  Value(double d) : v_(d) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(bool b) : v_(b) {}

  static Value sym(std::string name) { return Value(Symbol{std::move(name)}); }

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  bool is_symbol() const { return kind() == Kind::Symbol; }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_float() const { return kind() == Kind::Float; }
  bool is_str() const { return kind() == Kind::Str; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_number() const { return is_int() || is_float(); }

  const Symbol& as_symbol() const { return std::get<Symbol>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  double as_number() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }

  const Storage& storage() const { return v_; }

  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

  // Total order: by kind first, then by payload. Used for canonical ordering
  // of signatures, never for guard comparisons.
  friend bool operator<(const Value& a, const Value& b);

 private:
  Storage v_;
};

/// Surface rendering as it appears in pattern text (`:sym`, `"str"`, `1.5`).
std::string to_source(const Value& v);

const char* kind_name(Value::Kind k);

/// Timestamped, sequence-numbered tuple; the unit of matching.
struct Message {
  MsgId id = 0;
  SeqNo seq = 0;
  TimeMs ts = 0;
  Symbol type;
  std::vector<Value> attrs;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Matching order key: timestamp, ties broken by ingestion sequence.
struct OrderKey {
  TimeMs ts;
  SeqNo seq;
  friend auto operator<=>(const OrderKey&, const OrderKey&) = default;
};

inline OrderKey order_key(const Message& m) { return {m.ts, m.seq}; }

}  // namespace sprw
