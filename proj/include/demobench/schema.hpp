#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace demobench {

class AttributeSchema;

/// One protected attribute and its categorical value domain, e.g.
/// ("sex", ["Female", "Male"]). Value order is significant: it fixes the
/// canonical ordering of groups everywhere downstream.
struct Attribute {
    std::string name;
    std::vector<std::string> values;
};

/// Identifies one intersectional group as a tuple of value indices, one per
/// schema attribute, in schema order. Keys are created only through an
/// AttributeSchema, so a key is valid by construction; the embedded schema
/// fingerprint catches accidental cross-schema use.
///
/// Ordering is lexicographic over the index tuple, which makes std::map
/// iteration the canonical group order (first attribute varies slowest).
class GroupKey {
public:
    GroupKey() = default;

    std::uint64_t schema_fingerprint() const { return schema_fp_; }
    std::size_t size() const { return idx_.size(); }
    std::uint32_t value_index(std::size_t attribute_pos) const { return idx_[attribute_pos]; }

    auto operator<=>(const GroupKey&) const = default;

private:
    friend class AttributeSchema;
    GroupKey(std::uint64_t fp, std::vector<std::uint32_t> idx)
        : schema_fp_(fp), idx_(std::move(idx)) {}

    std::uint64_t schema_fp_ = 0;
    std::vector<std::uint32_t> idx_;
};

/// Alias table applied when matching raw attribute values during ingestion,
/// e.g. {"sex": {"M": "Male", "F": "Female"}}. Aliases do not change the
/// group space or the schema fingerprint.
using AliasMap = std::map<std::string, std::map<std::string, std::string>>;

class AttributeSchema {
public:
    /// Validates: at least one attribute, unique names, non-empty
    /// duplicate-free value lists, group space of at least 2, and no '|' in
    /// names or values ('|' is the group-label separator).
    /// Throws AuditError(invalid_schema).
    explicit AttributeSchema(std::vector<Attribute> attributes, AliasMap aliases = {});

    const std::vector<Attribute>& attributes() const { return attributes_; }
    const AliasMap& aliases() const { return aliases_; }
    std::size_t attribute_count() const { return attributes_.size(); }

    /// Product of the value-list sizes.
    std::size_t group_space_size() const;

    /// Hash of attribute names and value lists (aliases excluded): two
    /// schemas with equal fingerprints define the same group space.
    std::uint64_t fingerprint() const { return fingerprint_; }

    bool same_definition(const AttributeSchema& other) const {
        return fingerprint_ == other.fingerprint_;
    }

    /// Builds a key from one raw value per attribute, in schema order.
    /// Raw values are trimmed and alias-resolved; membership is
    /// case-sensitive. Throws AuditError(unknown_attribute_value).
    GroupKey key(const std::vector<std::string>& raw_values) const;

    /// Resolves a single raw value for the attribute at `attribute_pos` to
    /// its canonical value index.
    std::uint32_t resolve_value(std::size_t attribute_pos, const std::string& raw) const;

    /// Every group in canonical order (Cartesian product, first attribute
    /// varying slowest).
    std::vector<GroupKey> group_space() const;

    bool contains(const GroupKey& key) const;

    /// "value1|value2|..." in schema attribute order.
    std::string group_label(const GroupKey& key) const;

    /// Inverse of group_label. Throws AuditError(unknown_attribute_value).
    GroupKey parse_group(const std::string& label) const;

    const std::string& value_of(const GroupKey& key, std::size_t attribute_pos) const;

private:
    std::vector<Attribute> attributes_;
    AliasMap aliases_;
    std::uint64_t fingerprint_ = 0;
};

}  // namespace demobench
