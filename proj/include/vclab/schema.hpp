#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace vclab::schema {

// Structural validator for the JSON-Schema subset used by the shipped report
// schema: type / properties / required / items / enum / additionalProperties /
// minimum / $ref into #/$defs. Returns every violation, not just the first.
class Validator {
 public:
  explicit Validator(const nlohmann::json& root_schema) : root_(root_schema) {}

  std::vector<std::string> validate(const nlohmann::json& value) {
    errors_.clear();
    check(value, root_, "$");
    return errors_;
  }

 private:
  const nlohmann::json& resolve(const nlohmann::json& s) {
    if (s.is_object() && s.contains("$ref")) {
      const std::string ref = s["$ref"].get<std::string>();
      const std::string prefix = "#/$defs/";
      if (ref.rfind(prefix, 0) != 0)
        throw std::runtime_error("schema: unsupported $ref " + ref);
      const std::string name = ref.substr(prefix.size());
      if (!root_.contains("$defs") || !root_["$defs"].contains(name))
        throw std::runtime_error("schema: missing $defs entry " + name);
      return root_["$defs"][name];
    }
    return s;
  }

  static bool type_matches(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    return false;
  }

  void check(const nlohmann::json& value, const nlohmann::json& schema_in, const std::string& path) {
    const nlohmann::json& s = resolve(schema_in);
    if (s.contains("oneOf")) {  // conjunctive with any sibling keywords
      bool any = false;
      for (const auto& alt : s["oneOf"]) {
        std::vector<std::string> saved;
        saved.swap(errors_);
        check(value, alt, path);
        any = any || errors_.empty();
        errors_.swap(saved);
      }
      if (!any) {
        errors_.push_back(path + ": matches no oneOf alternative");
        return;
      }
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || type_matches(value, t.get<std::string>());
      } else {
        ok = type_matches(value, s["type"].get<std::string>());
      }
      if (!ok) {
        errors_.push_back(path + ": expected type " + s["type"].dump());
        return;
      }
    }
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok = ok || e == value;
      if (!ok) errors_.push_back(path + ": value not in enum " + s["enum"].dump());
    }
    if (s.contains("minimum") && value.is_number()) {
      if (value.get<double>() < s["minimum"].get<double>())
        errors_.push_back(path + ": below minimum " + s["minimum"].dump());
    }
    if (value.is_object()) {
      if (s.contains("required")) {
        for (const auto& r : s["required"]) {
          const std::string key = r.get<std::string>();
          if (!value.contains(key)) errors_.push_back(path + ": missing required field " + key);
        }
      }
      const bool extra_ok = !s.contains("additionalProperties") ||
                            s["additionalProperties"].get<bool>();
      for (const auto& [key, sub] : value.items()) {
        if (s.contains("properties") && s["properties"].contains(key)) {
          check(sub, s["properties"][key], path + "." + key);
        } else if (!extra_ok) {
          errors_.push_back(path + ": unexpected field " + key);
        }
      }
    }
    if (value.is_array() && s.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i)
        check(value[i], s["items"], path + "[" + std::to_string(i) + "]");
    }
  }

  const nlohmann::json& root_;
  std::vector<std::string> errors_;
};

inline std::vector<std::string> validate(const nlohmann::json& value,
                                         const nlohmann::json& schema) {
  return Validator(schema).validate(value);
}

}  // namespace vclab::schema
