#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace disktau {

enum class Sector { closed, open };

// <tau_{a_1} ... tau_{a_l} sigma^k>_g with the descendents stored sorted.
struct BracketKey {
  Sector sector = Sector::closed;
  int genus = 0;
  std::vector<int> a;
  int k = 0;

  static BracketKey closed(int genus, std::vector<int> a);
  static BracketKey open(int genus, std::vector<int> a, int k);

  std::string to_string() const;
  friend auto operator<=>(const BracketKey&, const BracketKey&) = default;
};

std::vector<int> sorted(std::vector<int> a);
int sum_of(const std::vector<int>& a);

// The g >= 0 with sum a_i = 3g - 3 + l, if any.
std::optional<int> genus_of_closed(const std::vector<int>& a);
// The g >= 0 with 2 sum a_i = 3g - 3 + k + 2l, if any.
std::optional<int> genus_of_open(const std::vector<int>& a, int k);

}  // namespace disktau
