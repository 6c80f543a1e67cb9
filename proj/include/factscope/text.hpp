#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace factscope {

/// Normalizes and splits text into tokens: lowercase, diacritics folded to
/// ASCII, pure punctuation dropped. Non-Latin letters pass through unchanged.
std::vector<std::string> tokenize(std::string_view text);

/// Canonical form used for literal matching and document building.
std::string normalize(std::string_view text);

class StopwordSet {
  public:
    StopwordSet() = default;
    static StopwordSet load(const std::string& path);
    static StopwordSet builtin_english();

    void insert(std::string_view word);
    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

}  // namespace factscope
