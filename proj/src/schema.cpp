#include "demobench/schema.hpp"

#include <algorithm>
#include <set>

#include "demobench/detail/csv.hpp"
#include "demobench/detail/hash.hpp"
#include "demobench/errors.hpp"

namespace demobench {

namespace {

void check_token(const std::string& token, const char* what) {
    if (token.empty()) {
        fail(errc::invalid_schema, std::string(what) + " must be non-empty");
    }
    if (token.find('|') != std::string::npos || token.find('\n') != std::string::npos) {
        fail(errc::invalid_schema,
             std::string(what) + " '" + token + "' contains a reserved character ('|' or newline)");
    }
    if (detail::trim(token) != token) {
        fail(errc::invalid_schema,
             std::string(what) + " '" + token + "' has surrounding whitespace");
    }
}

std::uint64_t compute_fingerprint(const std::vector<Attribute>& attributes) {
    detail::Fnv1a h;
    for (const auto& attr : attributes) {
        h.update(attr.name).update("\x1f");
        for (const auto& v : attr.values) {
            h.update(v).update("\x1e");
        }
        h.update("\x1d");
    }
    return h.value();
}

}  // namespace

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes, AliasMap aliases)
    : attributes_(std::move(attributes)), aliases_(std::move(aliases)) {
    if (attributes_.empty()) {
        fail(errc::invalid_schema, "schema needs at least one attribute");
    }
    std::set<std::string> names;
    for (const auto& attr : attributes_) {
        check_token(attr.name, "attribute name");
        if (!names.insert(attr.name).second) {
            fail(errc::invalid_schema, "duplicate attribute name '" + attr.name + "'");
        }
        if (attr.values.empty()) {
            fail(errc::invalid_schema, "attribute '" + attr.name + "' has no values");
        }
        std::set<std::string> seen;
        for (const auto& v : attr.values) {
            check_token(v, "attribute value");
            if (!seen.insert(v).second) {
                fail(errc::invalid_schema,
                     "attribute '" + attr.name + "' lists value '" + v + "' twice");
            }
        }
    }
    for (const auto& [attr_name, mapping] : aliases_) {
        if (!names.count(attr_name)) {
            fail(errc::invalid_schema, "alias map references unknown attribute '" + attr_name + "'");
        }
        const auto& attr = *std::find_if(attributes_.begin(), attributes_.end(),
                                         [&](const Attribute& a) { return a.name == attr_name; });
        for (const auto& [from, to] : mapping) {
            if (std::find(attr.values.begin(), attr.values.end(), to) == attr.values.end()) {
                fail(errc::invalid_schema,
                     "alias '" + from + "' -> '" + to + "' targets a value outside attribute '" +
                         attr_name + "'");
            }
        }
    }
    if (group_space_size() < 2) {
        fail(errc::invalid_schema, "group space must contain at least 2 groups");
    }
    fingerprint_ = compute_fingerprint(attributes_);
}

std::size_t AttributeSchema::group_space_size() const {
    std::size_t n = 1;
    for (const auto& attr : attributes_) n *= attr.values.size();
    return n;
}

std::uint32_t AttributeSchema::resolve_value(std::size_t attribute_pos, const std::string& raw) const {
    const Attribute& attr = attributes_[attribute_pos];
    std::string value = detail::trim(raw);
    auto alias_it = aliases_.find(attr.name);
    if (alias_it != aliases_.end()) {
        auto mapped = alias_it->second.find(value);
        if (mapped != alias_it->second.end()) value = mapped->second;
    }
    auto it = std::find(attr.values.begin(), attr.values.end(), value);
    if (it == attr.values.end()) {
        fail(errc::unknown_attribute_value,
             "value '" + raw + "' is not in the domain of attribute '" + attr.name + "'");
    }
    return static_cast<std::uint32_t>(it - attr.values.begin());
}

GroupKey AttributeSchema::key(const std::vector<std::string>& raw_values) const {
    if (raw_values.size() != attributes_.size()) {
        fail(errc::unknown_attribute_value,
             "expected " + std::to_string(attributes_.size()) + " attribute values, got " +
                 std::to_string(raw_values.size()));
    }
    std::vector<std::uint32_t> idx(attributes_.size());
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        idx[i] = resolve_value(i, raw_values[i]);
    }
    return GroupKey(fingerprint_, std::move(idx));
}

std::vector<GroupKey> AttributeSchema::group_space() const {
    std::vector<GroupKey> keys;
    keys.reserve(group_space_size());
    std::vector<std::uint32_t> idx(attributes_.size(), 0);
    while (true) {
        keys.emplace_back(GroupKey(fingerprint_, idx));
        std::size_t pos = attributes_.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < attributes_[pos].values.size()) break;
            idx[pos] = 0;
            if (pos == 0) return keys;
        }
    }
}

bool AttributeSchema::contains(const GroupKey& key) const {
    if (key.schema_fingerprint() != fingerprint_ || key.size() != attributes_.size()) return false;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (key.value_index(i) >= attributes_[i].values.size()) return false;
    }
    return true;
}

std::string AttributeSchema::group_label(const GroupKey& key) const {
    if (!contains(key)) {
        fail(errc::unknown_group, "group key does not belong to this schema");
    }
    std::string label;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (i > 0) label += '|';
        label += attributes_[i].values[key.value_index(i)];
    }
    return label;
}

GroupKey AttributeSchema::parse_group(const std::string& label) const {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t bar = label.find('|', pos);
        parts.push_back(label.substr(pos, bar == std::string::npos ? bar : bar - pos));
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }
    return key(parts);
}

const std::string& AttributeSchema::value_of(const GroupKey& key, std::size_t attribute_pos) const {
    return attributes_[attribute_pos].values[key.value_index(attribute_pos)];
}

}  // namespace demobench
