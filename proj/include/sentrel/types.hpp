#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sentrel {

// Class order matters: it is the tie-break order for every classifier.
enum class Label : int { pos = 0, neg = 1, neu = 2 };
inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<Label, kNumLabels> kAllLabels{Label::pos, Label::neg, Label::neu};

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

inline constexpr std::size_t index_of(Label label) { return static_cast<std::size_t>(label); }

enum class EntityType : int { per = 0, org = 1, loc = 2, geo = 3 };
inline constexpr std::size_t kNumEntityTypes = 4;

std::string_view to_string(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view text);

// Identity of a synonym group: the normalized canonical name. Names listed in
// the synonym file map to the first name of their line; any other name is its
// own singleton group.
class GroupId {
 public:
  GroupId() = default;
  explicit GroupId(std::string key) : key_(std::move(key)) {}

  const std::string& key() const { return key_; }
  bool empty() const { return key_.empty(); }

  friend bool operator==(const GroupId&, const GroupId&) = default;
  friend auto operator<=>(const GroupId&, const GroupId&) = default;

 private:
  std::string key_;
};

// Ordered (source, target) pair inside one document.
struct PairKey {
  std::string doc_id;
  GroupId source;
  GroupId target;

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct LabeledPair {
  PairKey key;
  Label label = Label::neu;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

}  // namespace sentrel

template <>
struct std::hash<sentrel::GroupId> {
  std::size_t operator()(const sentrel::GroupId& g) const noexcept {
    return std::hash<std::string>{}(g.key());
  }
};
