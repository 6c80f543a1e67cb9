#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace factscope {

using ItemCode = std::uint32_t;
using FactId = std::uint32_t;

constexpr ItemCode kInvalidItem = static_cast<ItemCode>(-1);

enum class ItemKind : std::uint8_t { Entity, Predicate, Type, Literal };

const char* to_string(ItemKind kind);
ItemKind item_kind_from_string(const std::string& s);

/// A qualifier-bearing fact: the main s/p/o triple plus ordered
/// (qualifier predicate, qualifier object) pairs.
struct Fact {
    FactId id = 0;
    ItemCode subject = kInvalidItem;
    ItemCode predicate = kInvalidItem;
    ItemCode object = kInvalidItem;
    std::vector<std::pair<ItemCode, ItemCode>> qualifiers;

    bool contains(ItemCode x) const {
        if (subject == x || predicate == x || object == x) return true;
        for (const auto& [qp, qo] : qualifiers) {
            if (qp == x || qo == x) return true;
        }
        return false;
    }

    bool operator==(const Fact& other) const {
        return subject == other.subject && predicate == other.predicate &&
               object == other.object && qualifiers == other.qualifiers;
    }
};

struct KBItem {
    ItemCode code = kInvalidItem;
    std::string external_id;
    std::string label;
    std::vector<std::string> aliases;
    std::string description;
    ItemKind kind = ItemKind::Entity;
};

/// Role counts of an item over its 1-hop neighborhood NF(x).
struct FrequencyProfile {
    std::uint32_t subject_count = 0;
    std::uint32_t object_count = 0;
    std::uint32_t qualifier_object_count = 0;
    std::uint32_t total = 0;  // |NF(x)|
};

enum class HopDistance : std::uint8_t { Hop1, Hop2, Far };

/// Connectivity contribution of a pairwise distance: 1, 0.5 or 0.
inline double connectivity_value(HopDistance d) {
    switch (d) {
        case HopDistance::Hop1: return 1.0;
        case HopDistance::Hop2: return 0.5;
        default: return 0.0;
    }
}

}  // namespace factscope
