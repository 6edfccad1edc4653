#pragma once

// Minimal JSON emitter for CLI output.  Keys keep insertion order and every
// floating-point value is printed with 17 significant digits so numeric
// output can be reproduced bit-exactly from another language.

#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccnlab/checkpoint.hpp"  // fmt17

namespace ccnlab {

class JsonValue {
 public:
  enum class Type { object, array, number, integer, string, boolean, null };

  JsonValue() : type_(Type::null) {}
  static JsonValue object() { JsonValue v; v.type_ = Type::object; return v; }
  static JsonValue array() { JsonValue v; v.type_ = Type::array; return v; }
  JsonValue(double d) : type_(Type::number), num_(d) {}
  JsonValue(int i) : type_(Type::integer), int_(i) {}
  JsonValue(long long i) : type_(Type::integer), int_(i) {}
  JsonValue(bool b) : type_(Type::boolean), bool_(b) {}
  JsonValue(const char* s) : type_(Type::string), str_(s) {}
  JsonValue(std::string s) : type_(Type::string), str_(std::move(s)) {}

  JsonValue& set(const std::string& key, JsonValue v) {
    members_.emplace_back(key, std::move(v));
    return members_.back().second;
  }
  JsonValue& push(JsonValue v) {
    elements_.push_back(std::move(v));
    return elements_.back();
  }

  std::string dump(int indent = 2) const {
    std::ostringstream os;
    write(os, indent, 0);
    os << "\n";
    return os.str();
  }

 private:
  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }

  void write(std::ostringstream& os, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad1(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (type_) {
      case Type::object: {
        if (members_.empty()) { os << "{}"; return; }
        os << "{\n";
        for (size_t i = 0; i < members_.size(); ++i) {
          os << pad1 << quote(members_[i].first) << ": ";
          members_[i].second.write(os, indent, depth + 1);
          if (i + 1 < members_.size()) os << ',';
          os << '\n';
        }
        os << pad << '}';
        return;
      }
      case Type::array: {
        if (elements_.empty()) { os << "[]"; return; }
        os << "[\n";
        for (size_t i = 0; i < elements_.size(); ++i) {
          os << pad1;
          elements_[i].write(os, indent, depth + 1);
          if (i + 1 < elements_.size()) os << ',';
          os << '\n';
        }
        os << pad << ']';
        return;
      }
      case Type::number: os << fmt17(num_); return;
      case Type::integer: os << int_; return;
      case Type::string: os << quote(str_); return;
      case Type::boolean: os << (bool_ ? "true" : "false"); return;
      case Type::null: os << "null"; return;
    }
  }

  Type type_;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> elements_;
};

}  // namespace ccnlab
