// Copyright 2026 The streamPCQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "streampcq/syntax_profile.hpp"

#include <cctype>
#include <set>
#include <utility>

#include <json.hpp>

#include "builtin_resources.hpp"
#include "streampcq/bit_io.hpp"
#include "streampcq/error.hpp"

namespace streampcq::gpcc {

//============================================================================
// Expressions

enum class Op {
  kConst, kIdent, kNot, kNeg, kAdd, kSub, kMul,
  kEq, kNe, kLt, kLe, kGt, kGe, kAnd, kOr,
};

struct SyntaxExpression::Node {
  Op op = Op::kConst;
  std::int64_t value = 0;
  std::string name;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const SyntaxExpression::Node>;

[[noreturn]] void bad_expression(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::kInvalidProfile,
              "expression '" + std::string(text) + "': " + why);
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto node = parse_or();
    skip_space();
    if (pos_ != text_.size()) bad_expression(text_, "trailing input at " + std::to_string(pos_));
    return node;
  }

 private:
  static NodePtr make(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
    auto node = std::make_shared<SyntaxExpression::Node>();
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    // keep "<" from swallowing the first half of "<="
    if (token.size() == 1 && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=' &&
        (token == "<" || token == ">" || token == "!")) {
      return false;
    }
    pos_ += token.size();
    return true;
  }

  NodePtr parse_or() {
    auto lhs = parse_and();
    while (accept("||")) lhs = make(Op::kOr, lhs, parse_and());
    return lhs;
  }

  NodePtr parse_and() {
    auto lhs = parse_cmp();
    while (accept("&&")) lhs = make(Op::kAnd, lhs, parse_cmp());
    return lhs;
  }

  NodePtr parse_cmp() {
    auto lhs = parse_add();
    static constexpr std::pair<std::string_view, Op> kOps[] = {
        {"==", Op::kEq}, {"!=", Op::kNe}, {"<=", Op::kLe},
        {">=", Op::kGe}, {"<", Op::kLt},  {">", Op::kGt}};
    for (const auto& [token, op] : kOps) {
      if (accept(token)) return make(op, lhs, parse_add());
    }
    return lhs;
  }

  NodePtr parse_add() {
    auto lhs = parse_mul();
    for (;;) {
      if (accept("+")) lhs = make(Op::kAdd, lhs, parse_mul());
      else if (accept("-")) lhs = make(Op::kSub, lhs, parse_mul());
      else return lhs;
    }
  }

  NodePtr parse_mul() {
    auto lhs = parse_unary();
    while (accept("*")) lhs = make(Op::kMul, lhs, parse_unary());
    return lhs;
  }

  NodePtr parse_unary() {
    if (accept("!")) return make(Op::kNot, parse_unary());
    if (accept("-")) return make(Op::kNeg, parse_unary());
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) bad_expression(text_, "unexpected end");
    if (accept("(")) {
      auto inner = parse_or();
      if (!accept(")")) bad_expression(text_, "missing ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t value = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + (text_[pos_++] - '0');
      }
      auto node = std::make_shared<SyntaxExpression::Node>();
      node->op = Op::kConst;
      node->value = value;
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      int dots = 0;
      while (pos_ < text_.size()) {
        const char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
          ++pos_;
        } else if (d == '.' && dots == 0) {
          ++dots;
          ++pos_;
        } else {
          break;
        }
      }
      auto node = std::make_shared<SyntaxExpression::Node>();
      node->op = Op::kIdent;
      node->name = std::string(text_.substr(start, pos_ - start));
      if (node->name.back() == '.') bad_expression(text_, "dangling '.'");
      return node;
    }
    bad_expression(text_, std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::int64_t eval_node(const SyntaxExpression::Node& n,
                       const SyntaxExpression::Lookup& lookup) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kIdent: return lookup(n.name);
    case Op::kNot: return eval_node(*n.lhs, lookup) == 0;
    case Op::kNeg: return -eval_node(*n.lhs, lookup);
    case Op::kAdd: return eval_node(*n.lhs, lookup) + eval_node(*n.rhs, lookup);
    case Op::kSub: return eval_node(*n.lhs, lookup) - eval_node(*n.rhs, lookup);
    case Op::kMul: return eval_node(*n.lhs, lookup) * eval_node(*n.rhs, lookup);
    case Op::kEq: return eval_node(*n.lhs, lookup) == eval_node(*n.rhs, lookup);
    case Op::kNe: return eval_node(*n.lhs, lookup) != eval_node(*n.rhs, lookup);
    case Op::kLt: return eval_node(*n.lhs, lookup) < eval_node(*n.rhs, lookup);
    case Op::kLe: return eval_node(*n.lhs, lookup) <= eval_node(*n.rhs, lookup);
    case Op::kGt: return eval_node(*n.lhs, lookup) > eval_node(*n.rhs, lookup);
    case Op::kGe: return eval_node(*n.lhs, lookup) >= eval_node(*n.rhs, lookup);
    case Op::kAnd: return eval_node(*n.lhs, lookup) != 0 && eval_node(*n.rhs, lookup) != 0;
    case Op::kOr: return eval_node(*n.lhs, lookup) != 0 || eval_node(*n.rhs, lookup) != 0;
  }
  return 0;
}

void collect_identifiers(const SyntaxExpression::Node& n, std::vector<std::string>& out) {
  if (n.op == Op::kIdent) out.push_back(n.name);
  if (n.lhs) collect_identifiers(*n.lhs, out);
  if (n.rhs) collect_identifiers(*n.rhs, out);
}

}  // namespace

SyntaxExpression SyntaxExpression::parse(std::string_view text) {
  SyntaxExpression expr;
  expr.root_ = ExpressionParser(text).parse();
  expr.text_ = std::string(text);
  return expr;
}

SyntaxExpression SyntaxExpression::constant(std::int64_t value) {
  auto node = std::make_shared<Node>();
  node->op = Op::kConst;
  node->value = value;
  SyntaxExpression expr;
  expr.root_ = std::move(node);
  expr.text_ = std::to_string(value);
  return expr;
}

std::int64_t SyntaxExpression::evaluate(const Lookup& lookup) const {
  return eval_node(*root_, lookup);
}

std::vector<std::string> SyntaxExpression::identifiers() const {
  std::vector<std::string> out;
  collect_identifiers(*root_, out);
  return out;
}

bool SyntaxExpression::is_constant() const { return root_->op == Op::kConst; }

//============================================================================
// Profile documents

std::string_view field_coding_name(FieldCoding coding) {
  switch (coding) {
    case FieldCoding::kFixedUnsigned: return "u";
    case FieldCoding::kUnsignedExpGolomb: return "ue";
    case FieldCoding::kSignedExpGolomb: return "se";
    case FieldCoding::kFlag: return "flag";
    case FieldCoding::kSignMagnitude: return "sn";
  }
  return "ue";
}

const UnitSyntax* SyntaxDescriptorProfile::syntax_for(UnitRole role) const {
  for (const auto& unit : syntax) {
    if (unit.role == role) return &unit;
  }
  return nullptr;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_profile(const std::string& why) {
  throw Error(ErrorCode::kInvalidProfile, why);
}

FieldCoding parse_coding(const std::string& name) {
  for (auto coding : {FieldCoding::kFixedUnsigned, FieldCoding::kUnsignedExpGolomb,
                      FieldCoding::kSignedExpGolomb, FieldCoding::kFlag,
                      FieldCoding::kSignMagnitude}) {
    if (field_coding_name(coding) == name) return coding;
  }
  bad_profile("unknown coding '" + name + "'");
}

SyntaxExpression parse_expression_value(const json& value) {
  if (value.is_number_integer()) return SyntaxExpression::constant(value.get<std::int64_t>());
  if (value.is_string()) return SyntaxExpression::parse(value.get<std::string>());
  bad_profile("expression must be an integer or a string");
}

json expression_to_json(const SyntaxExpression& expr) {
  if (expr.is_constant()) return expr.evaluate([](const std::string&) { return 0; });
  return expr.text();
}

std::pair<std::string, std::string> split_qualified(const std::string& name) {
  const auto dot = name.find('.');
  if (dot == std::string::npos) return {"", name};
  return {name.substr(0, dot), name.substr(dot + 1)};
}

FieldRef parse_field_ref(const json& doc, const char* key) {
  if (!doc.contains(key)) bad_profile(std::string("missing '") + key + "'");
  const auto& ref = doc.at(key);
  const auto [role, field] = split_qualified(ref.at("field").get<std::string>());
  if (role.empty()) bad_profile(std::string(key) + " must be qualified as role.field");
  FieldRef out;
  out.role = parse_unit_role(role);
  out.field = field;
  out.offset = ref.value("offset", std::int64_t{0});
  return out;
}

// Every identifier must resolve to an earlier field or an assumption.
void validate_references(const SyntaxDescriptorProfile& profile) {
  std::map<UnitRole, std::set<std::string>> declared;
  std::set<UnitRole> roles_seen;
  std::set<UnitRole> mapped_roles;
  for (const auto& [type, role] : profile.type_map) mapped_roles.insert(role);

  for (const auto& unit : profile.syntax) {
    if (!roles_seen.insert(unit.role).second) {
      bad_profile("duplicate syntax entry for unit '" +
                  std::string(unit_role_name(unit.role)) + "'");
    }
    if (!mapped_roles.count(unit.role)) {
      bad_profile("no unit_type maps to '" + std::string(unit_role_name(unit.role)) + "'");
    }
    auto& own = declared[unit.role];
    for (const auto& field : unit.fields) {
      auto check = [&](const std::optional<SyntaxExpression>& expr, const char* what) {
        if (!expr) return;
        for (const auto& id : expr->identifiers()) {
          const auto [role_name, name] = split_qualified(id);
          if (role_name.empty()) {
            if (!own.count(name)) {
              bad_profile(std::string(what) + " of '" + field.name +
                          "' references '" + id + "' which is not an earlier field");
            }
            continue;
          }
          if (profile.assumptions.count(id)) continue;
          const UnitRole role = parse_unit_role(role_name);
          if (role == unit.role || !declared.count(role) || !declared.at(role).count(name)) {
            bad_profile(std::string(what) + " of '" + field.name + "' references '" +
                        id + "' which is neither an earlier unit's field nor an assumption");
          }
        }
      };
      check(field.presence_condition, "condition");
      check(field.bit_width, "bit width");
      check(field.repeat, "repeat count");
      if (field.name.empty() || field.name.find('.') != std::string::npos) {
        bad_profile("invalid field name '" + field.name + "'");
      }
      if (!own.insert(field.name).second) {
        bad_profile("duplicate field '" + field.name + "' in unit '" +
                    std::string(unit_role_name(unit.role)) + "'");
      }
    }
  }

  for (const auto* ref : {&profile.tqp_field, &profile.tnsl_field}) {
    const auto it = declared.find(ref->role);
    if (it == declared.end() || !it->second.count(ref->field)) {
      bad_profile("target field '" + std::string(unit_role_name(ref->role)) + "." +
                  ref->field + "' is not declared by any descriptor");
    }
  }
}

}  // namespace

SyntaxDescriptorProfile parse_profile(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    bad_profile(std::string("profile is not valid JSON: ") + e.what());
  }

  SyntaxDescriptorProfile profile;
  try {
    profile.profile_name = doc.at("profile_name").get<std::string>();
    for (const auto& [key, role] : doc.at("unit_types").items()) {
      const int type = std::stoi(key);
      if (type < 0 || type > 255) bad_profile("unit_type out of range: " + key);
      profile.type_map[static_cast<std::uint8_t>(type)] =
          parse_unit_role(role.get<std::string>());
    }
    if (doc.contains("assumptions")) {
      for (const auto& [key, value] : doc.at("assumptions").items()) {
        if (split_qualified(key).first.empty()) {
          bad_profile("assumption '" + key + "' must be qualified as role.field");
        }
        profile.assumptions[key] = value.get<std::int64_t>();
      }
    }
    for (const auto& unit_doc : doc.at("syntax")) {
      UnitSyntax unit;
      unit.role = parse_unit_role(unit_doc.at("unit").get<std::string>());
      for (const auto& field_doc : unit_doc.at("fields")) {
        FieldDescriptor field;
        field.name = field_doc.at("name").get<std::string>();
        field.coding = parse_coding(field_doc.at("coding").get<std::string>());
        if (field_doc.contains("bits")) field.bit_width = parse_expression_value(field_doc.at("bits"));
        if (field_doc.contains("when")) field.presence_condition = parse_expression_value(field_doc.at("when"));
        if (field_doc.contains("repeat")) field.repeat = parse_expression_value(field_doc.at("repeat"));

        const bool fixed = field.coding == FieldCoding::kFixedUnsigned ||
                           field.coding == FieldCoding::kSignMagnitude;
        if (fixed && !field.bit_width) bad_profile("field '" + field.name + "' needs 'bits'");
        if (!fixed && field.bit_width) bad_profile("field '" + field.name + "' must not set 'bits'");
        unit.fields.push_back(std::move(field));
      }
      profile.syntax.push_back(std::move(unit));
    }
    profile.tqp_field = parse_field_ref(doc, "tqp_field");
    profile.tnsl_field = parse_field_ref(doc, "tnsl_field");
  } catch (const json::exception& e) {
    bad_profile(std::string("malformed profile: ") + e.what());
  } catch (const std::invalid_argument&) {
    bad_profile("unit_types keys must be integers");
  }

  validate_references(profile);
  return profile;
}

std::string profile_to_json(const SyntaxDescriptorProfile& profile) {
  json doc;
  doc["profile_name"] = profile.profile_name;
  json types = json::object();
  for (const auto& [type, role] : profile.type_map) {
    types[std::to_string(type)] = unit_role_name(role);
  }
  doc["unit_types"] = types;
  doc["assumptions"] = profile.assumptions;
  json syntax = json::array();
  for (const auto& unit : profile.syntax) {
    json fields = json::array();
    for (const auto& f : unit.fields) {
      json fd;
      fd["name"] = f.name;
      fd["coding"] = field_coding_name(f.coding);
      if (f.bit_width) fd["bits"] = expression_to_json(*f.bit_width);
      if (f.presence_condition) fd["when"] = expression_to_json(*f.presence_condition);
      if (f.repeat) fd["repeat"] = expression_to_json(*f.repeat);
      fields.push_back(fd);
    }
    syntax.push_back({{"unit", unit_role_name(unit.role)}, {"fields", fields}});
  }
  doc["syntax"] = syntax;
  auto ref_json = [](const FieldRef& ref) {
    return json{{"field", std::string(unit_role_name(ref.role)) + "." + ref.field},
                {"offset", ref.offset}};
  };
  doc["tqp_field"] = ref_json(profile.tqp_field);
  doc["tnsl_field"] = ref_json(profile.tnsl_field);
  return doc.dump(2);
}

std::vector<std::string> builtin_profile_names() {
  std::vector<std::string> names;
  for (const auto& resource : detail::builtin_profiles()) names.emplace_back(resource.name);
  return names;
}

const SyntaxDescriptorProfile& builtin_profile(std::string_view name) {
  // Parsed once; the documents are immutable.
  static const std::map<std::string, SyntaxDescriptorProfile, std::less<>> profiles = [] {
    std::map<std::string, SyntaxDescriptorProfile, std::less<>> out;
    for (const auto& resource : detail::builtin_profiles()) {
      out.emplace(std::string(resource.name), parse_profile(resource.text));
    }
    return out;
  }();
  const auto it = profiles.find(name);
  if (it == profiles.end()) {
    throw Error(ErrorCode::kConfigError, "no built-in profile named '" + std::string(name) + "'");
  }
  return it->second;
}

//============================================================================
// Descriptor walk

namespace {

constexpr std::int64_t kMaxRepeat = 1 << 16;

class FieldScope {
 public:
  FieldScope(const SyntaxDescriptorProfile& profile, const SyntaxContext& context,
             const FieldMap& own)
      : profile_(profile), context_(context), own_(own) {}

  std::int64_t operator()(const std::string& id) const {
    const auto dot = id.find('.');
    if (dot == std::string::npos) {
      const auto it = own_.find(id);
      return it == own_.end() ? 0 : it->second;
    }
    const UnitRole role = parse_unit_role(id.substr(0, dot));
    const auto unit = context_.find(role);
    if (unit != context_.end()) {
      const auto it = unit->second.find(id.substr(dot + 1));
      return it == unit->second.end() ? 0 : it->second;
    }
    const auto assumed = profile_.assumptions.find(id);
    if (assumed != profile_.assumptions.end()) return assumed->second;
    throw Error(ErrorCode::kMissingParameterSet,
                "'" + id + "' requires a preceding " +
                    std::string(unit_role_name(role)) + " unit");
  }

 private:
  const SyntaxDescriptorProfile& profile_;
  const SyntaxContext& context_;
  const FieldMap& own_;
};

int checked_width(const FieldDescriptor& field, const FieldScope& scope) {
  const std::int64_t width = field.bit_width->evaluate(scope);
  if (width < 0 || width > 64) {
    throw Error(ErrorCode::kBitstreamExhausted,
                "field '" + field.name + "' has width " + std::to_string(width));
  }
  return static_cast<int>(width);
}

std::int64_t checked_repeat(const FieldDescriptor& field, const FieldScope& scope) {
  if (!field.repeat) return 1;
  const std::int64_t count = field.repeat->evaluate(scope);
  if (count < 0 || count > kMaxRepeat) {
    throw Error(ErrorCode::kBitstreamExhausted,
                "field '" + field.name + "' repeats " + std::to_string(count) + " times");
  }
  return count;
}

}  // namespace

FieldMap extract_syntax_fields(const TlvUnit& unit, const SyntaxDescriptorProfile& profile,
                               const SyntaxContext& context) {
  const UnitRole role = role_of(profile.type_map, unit.unit_type);
  const UnitSyntax* syntax = profile.syntax_for(role);
  if (syntax == nullptr) {
    throw Error(ErrorCode::kProfileMismatch,
                "profile '" + profile.profile_name + "' has no descriptors for unit type " +
                    std::to_string(unit.unit_type),
                unit.stream_offset);
  }

  FieldMap fields;
  FieldScope scope(profile, context, fields);
  BitReader reader(unit.payload);
  try {
    for (const auto& field : syntax->fields) {
      if (field.presence_condition && field.presence_condition->evaluate(scope) == 0) continue;
      const std::int64_t count = checked_repeat(field, scope);
      for (std::int64_t i = 0; i < count; ++i) {
        std::int64_t value = 0;
        switch (field.coding) {
          case FieldCoding::kFixedUnsigned:
            value = static_cast<std::int64_t>(reader.read_bits(checked_width(field, scope)));
            break;
          case FieldCoding::kUnsignedExpGolomb:
            value = static_cast<std::int64_t>(reader.read_ue());
            break;
          case FieldCoding::kSignedExpGolomb:
            value = reader.read_se();
            break;
          case FieldCoding::kFlag:
            value = reader.read_flag();
            break;
          case FieldCoding::kSignMagnitude:
            value = reader.read_sign_magnitude(checked_width(field, scope));
            break;
        }
        fields[field.name] = value;
      }
    }
  } catch (const Error& e) {
    // Re-anchor payload-relative failures to the unit's position in the stream.
    if (e.code() == ErrorCode::kBitstreamExhausted || e.code() == ErrorCode::kMalformedExpGolomb) {
      throw Error(e.code(),
                  std::string(e.what()) + " (unit type " + std::to_string(unit.unit_type) +
                      " at offset " + std::to_string(unit.stream_offset) + ")",
                  unit.stream_offset);
    }
    throw;
  }
  return fields;
}

std::vector<std::uint8_t> write_syntax_fields(UnitRole role, const FieldMap& values,
                                              const SyntaxDescriptorProfile& profile,
                                              const SyntaxContext& context) {
  const UnitSyntax* syntax = profile.syntax_for(role);
  if (syntax == nullptr) {
    throw Error(ErrorCode::kProfileMismatch, "profile '" + profile.profile_name +
                                                 "' has no descriptors for '" +
                                                 std::string(unit_role_name(role)) + "'");
  }
  FieldMap written;
  FieldScope scope(profile, context, written);
  BitWriter writer;
  for (const auto& field : syntax->fields) {
    if (field.presence_condition && field.presence_condition->evaluate(scope) == 0) continue;
    const auto it = values.find(field.name);
    const std::int64_t value = it == values.end() ? 0 : it->second;
    const std::int64_t count = checked_repeat(field, scope);
    for (std::int64_t i = 0; i < count; ++i) {
      switch (field.coding) {
        case FieldCoding::kFixedUnsigned:
          writer.write_bits(static_cast<std::uint64_t>(value), checked_width(field, scope));
          break;
        case FieldCoding::kUnsignedExpGolomb:
          writer.write_ue(static_cast<std::uint64_t>(value));
          break;
        case FieldCoding::kSignedExpGolomb:
          writer.write_se(value);
          break;
        case FieldCoding::kFlag:
          writer.write_flag(value != 0);
          break;
        case FieldCoding::kSignMagnitude:
          writer.write_sign_magnitude(value, checked_width(field, scope));
          break;
      }
    }
    if (count > 0) written[field.name] = value;
  }
  writer.byte_align();
  return std::move(writer).take();
}

}  // namespace streampcq::gpcc
