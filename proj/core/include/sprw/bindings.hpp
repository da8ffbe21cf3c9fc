#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sprw/value.hpp"

namespace sprw {

/// Immutable-by-convention logic-variable environment built by unification.
/// `values` holds plain bindings; `distinct` holds, per `!name` term, the
/// values already claimed by messages in the same combination.
class Bindings {
 public:
  using Entry = std::pair<std::string, Value>;
  using DistinctEntry = std::pair<std::string, std::vector<Value>>;

  const Value* find(std::string_view name) const;

  /// Binds `name`, or checks agreement if already bound.
  bool bind(std::string_view name, const Value& v);

  /// Records `v` under a must-distinct name. Fails if already present.
  bool add_distinct(std::string_view name, const Value& v);

  /// Consistent union. On failure `*this` is left in an unspecified but valid
  /// state; callers merge into a copy.
  bool merge(const Bindings& other);

  /// Whether merge(other) would succeed, without copying.
  bool compatible(const Bindings& other) const;

  bool contains_distinct(std::string_view name, const Value& v) const;

  const std::vector<Entry>& values() const { return values_; }
  const std::vector<DistinctEntry>& distinct() const { return distinct_; }
  bool empty() const { return values_.empty() && distinct_.empty(); }

  friend bool operator==(const Bindings&, const Bindings&) = default;

 private:
  std::vector<Entry> values_;             // sorted by name
  std::vector<DistinctEntry> distinct_;   // sorted by name
};

/// Results saved by `bind(...)` transformers, in first-bind order. A later
/// bind of the same name overwrites the value in place.
class Intermediates {
 public:
  using Entry = std::pair<std::string, Value>;

  void set(const std::string& name, Value v);
  const Value* find(std::string_view name) const;
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const Intermediates&, const Intermediates&) = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace sprw
