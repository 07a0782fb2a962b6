#include "ident/value.hpp"

#include <algorithm>
#include <cstring>

#include "ident/errors.hpp"

namespace ident {

struct Value::Node {
  Rat rat;
  std::vector<Value> elems;
  std::vector<std::pair<std::string, Value>> entries;
};

namespace {

void append_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

void append_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

}  // namespace

Value Value::scalar(Rat r) {
  std::string key;
  key.reserve(17);
  key.push_back('S');
  append_u64(key, static_cast<std::uint64_t>(r.num()));
  append_u64(key, static_cast<std::uint64_t>(r.den()));
  auto node = std::make_shared<Node>();
  node->rat = r;
  return Value(Kind::scalar, std::move(key), std::move(node));
}

Value Value::real(double x, std::int64_t grid_den) {
  return scalar(quantize(x, grid_den));
}

Value Value::tuple(std::vector<Value> elems) {
  std::string key;
  key.push_back('T');
  append_u32(key, static_cast<std::uint32_t>(elems.size()));
  for (const Value& v : elems) key += v.key();
  auto node = std::make_shared<Node>();
  node->elems = std::move(elems);
  return Value(Kind::tuple, std::move(key), std::move(node));
}

Value Value::labeled(std::vector<std::pair<std::string, Value>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first) {
      throw ValidationError("duplicate label in labeled value: " + entries[i].first);
    }
  }
  std::string key;
  key.push_back('F');
  append_u32(key, static_cast<std::uint32_t>(entries.size()));
  for (const auto& [label, v] : entries) {
    key += label;
    key.push_back('\0');
    key += v.key();
  }
  auto node = std::make_shared<Node>();
  node->entries = std::move(entries);
  return Value(Kind::labeled, std::move(key), std::move(node));
}

Value Value::missing() {
  return Value(Kind::missing, "M", nullptr);
}

const Rat& Value::as_rat() const {
  if (kind_ != Kind::scalar) throw ValidationError("value is not a scalar");
  return node_->rat;
}

const std::vector<Value>& Value::elements() const {
  if (kind_ != Kind::tuple) throw ValidationError("value is not a tuple");
  return node_->elems;
}

const std::vector<std::pair<std::string, Value>>& Value::entries() const {
  if (kind_ != Kind::labeled) throw ValidationError("value is not labeled");
  return node_->entries;
}

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::scalar:
      return node_->rat.to_string();
    case Kind::tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < node_->elems.size(); ++i) {
        if (i) out += ", ";
        out += node_->elems[i].to_string();
      }
      return out + ")";
    }
    case Kind::labeled: {
      std::string out = "{";
      for (std::size_t i = 0; i < node_->entries.size(); ++i) {
        if (i) out += ", ";
        out += node_->entries[i].first + ": " + node_->entries[i].second.to_string();
      }
      return out + "}";
    }
    case Kind::missing:
      return "*";
  }
  return "?";
}

bool value_less(const Value& a, const Value& b) {
  auto rank = [](Value::Kind k) {
    switch (k) {
      case Value::Kind::scalar:
        return 0;
      case Value::Kind::tuple:
        return 1;
      case Value::Kind::labeled:
        return 2;
      case Value::Kind::missing:
        return 3;
    }
    return 4;
  };
  if (a.kind() != b.kind()) return rank(a.kind()) < rank(b.kind());
  switch (a.kind()) {
    case Value::Kind::scalar:
      return a.as_rat() < b.as_rat();
    case Value::Kind::tuple:
      return std::lexicographical_compare(a.elements().begin(), a.elements().end(),
                                          b.elements().begin(), b.elements().end(),
                                          value_less);
    case Value::Kind::labeled: {
      const auto& ea = a.entries();
      const auto& eb = b.entries();
      for (std::size_t i = 0; i < ea.size() && i < eb.size(); ++i) {
        if (ea[i].first != eb[i].first) return ea[i].first < eb[i].first;
        if (ea[i].second != eb[i].second) return value_less(ea[i].second, eb[i].second);
      }
      return ea.size() < eb.size();
    }
    case Value::Kind::missing:
      return false;
  }
  return false;
}

std::vector<Value> sorted(const ValueSet& set) {
  std::vector<Value> out(set.begin(), set.end());
  std::sort(out.begin(), out.end(), value_less);
  return out;
}

bool set_equal(const ValueSet& a, const ValueSet& b) {
  if (a.size() != b.size()) return false;
  for (const Value& v : a) {
    if (!b.count(v)) return false;
  }
  return true;
}

bool is_subset(const ValueSet& sub, const ValueSet& super) {
  if (sub.size() > super.size()) return false;
  for (const Value& v : sub) {
    if (!super.count(v)) return false;
  }
  return true;
}

}  // namespace ident
