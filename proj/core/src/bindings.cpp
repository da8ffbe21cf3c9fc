#include "sprw/bindings.hpp"

#include <algorithm>

namespace sprw {

namespace {

template <class Vec>
auto lower(Vec& v, std::string_view name) {
  return std::lower_bound(v.begin(), v.end(), name,
                          [](const auto& e, std::string_view n) { return e.first < n; });
}

}  // namespace

const Value* Bindings::find(std::string_view name) const {
  auto it = lower(values_, name);
  return it != values_.end() && it->first == name ? &it->second : nullptr;
}

bool Bindings::bind(std::string_view name, const Value& v) {
  auto it = lower(values_, name);
  if (it != values_.end() && it->first == name) return it->second == v;
  values_.insert(it, Entry{std::string(name), v});
  return true;
}

bool Bindings::contains_distinct(std::string_view name, const Value& v) const {
  auto it = lower(distinct_, name);
  if (it == distinct_.end() || it->first != name) return false;
  return std::find(it->second.begin(), it->second.end(), v) != it->second.end();
}

bool Bindings::add_distinct(std::string_view name, const Value& v) {
  auto it = lower(distinct_, name);
  if (it == distinct_.end() || it->first != name) {
    distinct_.insert(it, DistinctEntry{std::string(name), {v}});
    return true;
  }
  if (std::find(it->second.begin(), it->second.end(), v) != it->second.end()) return false;
  it->second.push_back(v);
  return true;
}

bool Bindings::merge(const Bindings& other) {
  for (const auto& [name, v] : other.values_)
    if (!bind(name, v)) return false;
  for (const auto& [name, vs] : other.distinct_)
    for (const auto& v : vs)
      if (!add_distinct(name, v)) return false;
  return true;
}

bool Bindings::compatible(const Bindings& other) const {
  for (const auto& [name, v] : other.values_)
    if (const Value* mine = find(name); mine && !(*mine == v)) return false;
  for (const auto& [name, vs] : other.distinct_)
    for (const auto& v : vs)
      if (contains_distinct(name, v)) return false;
  return true;
}

void Intermediates::set(const std::string& name, Value v) {
  for (auto& e : entries_) {
    if (e.first == name) {
      e.second = std::move(v);
      return;
    }
  }
  entries_.emplace_back(name, std::move(v));
}

const Value* Intermediates::find(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.first == name) return &e.second;
  return nullptr;
}

}  // namespace sprw
