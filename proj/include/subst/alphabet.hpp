#pragma once

// Finite alphabet of letters. Letters are referred to by index everywhere;
// display names are kept here for parsing and printing.

#include <cstdint>
#include <string>
#include <vector>

#include "subst/errors.hpp"

namespace subst {

using LetterIndex = std::uint8_t;

class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw ValidationError("alphabet must not be empty");
    if (names_.size() > 255) throw ValidationError("alphabet too large (max 255 letters)");
    for (size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw ValidationError("alphabet letter name must not be empty");
      for (size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j])
          throw ValidationError("duplicate letter name '" + names_[i] + "' in alphabet");
    }
  }

  int size() const { return (int)names_.size(); }

  const std::string& name(LetterIndex i) const {
    if (i >= names_.size())
      throw ValidationError("letter index " + std::to_string(i) + " outside alphabet");
    return names_[i];
  }

  bool has(const std::string& name) const { return find(name) >= 0; }

  LetterIndex index(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw ValidationError("unknown letter '" + name + "'");
    return (LetterIndex)i;
  }

  // True when every display name is a single character, which enables the
  // compact patch literal form ("rr/rr").
  bool singleCharNames() const {
    for (const auto& n : names_)
      if (n.size() != 1) return false;
    return true;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  int find(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return (int)i;
    return -1;
  }

  std::vector<std::string> names_;
};

}  // namespace subst
