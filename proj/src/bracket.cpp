#include "disktau/bracket.hpp"

#include "disktau/errors.hpp"

#include <algorithm>
#include <numeric>

namespace disktau {

std::vector<int> sorted(std::vector<int> a) {
  std::sort(a.begin(), a.end());
  return a;
}

int sum_of(const std::vector<int>& a) { return std::accumulate(a.begin(), a.end(), 0); }

BracketKey BracketKey::closed(int genus, std::vector<int> a) {
  return BracketKey{Sector::closed, genus, sorted(std::move(a)), 0};
}

BracketKey BracketKey::open(int genus, std::vector<int> a, int k) {
  if (k < 0) throw PreconditionError("negative boundary count");
  return BracketKey{Sector::open, genus, sorted(std::move(a)), k};
}

std::string BracketKey::to_string() const {
  std::string out = "<";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) out += ' ';
    out += "tau_" + std::to_string(a[i]);
  }
  if (sector == Sector::open && k > 0) {
    if (!a.empty()) out += ' ';
    out += "sigma^" + std::to_string(k);
  }
  out += ">_" + std::to_string(genus);
  if (sector == Sector::open) out += "^o";
  return out;
}

std::optional<int> genus_of_closed(const std::vector<int>& a) {
  for (int x : a)
    if (x < 0) return std::nullopt;
  int three_g = sum_of(a) + 3 - static_cast<int>(a.size());
  if (three_g < 0 || three_g % 3 != 0) return std::nullopt;
  return three_g / 3;
}

std::optional<int> genus_of_open(const std::vector<int>& a, int k) {
  if (k < 0) return std::nullopt;
  for (int x : a)
    if (x < 0) return std::nullopt;
  int three_g = 2 * sum_of(a) + 3 - k - 2 * static_cast<int>(a.size());
  if (three_g < 0 || three_g % 3 != 0) return std::nullopt;
  return three_g / 3;
}

}  // namespace disktau
