#include "ripkit/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ripkit {

std::vector<std::uint32_t> sample_subset(Rng& rng, std::uint32_t m,
                                         std::uint32_t d) {
  if (d > m) throw std::invalid_argument("sample_subset: d > m");
  std::vector<std::uint32_t> out;
  out.reserve(d);
  std::unordered_map<std::uint32_t, std::uint32_t> displaced;
  displaced.reserve(2 * d);
  auto slot = [&](std::uint32_t idx) {
    auto it = displaced.find(idx);
    return it == displaced.end() ? idx : it->second;
  };
  for (std::uint32_t i = 0; i < d; ++i) {
    const auto j =
        i + static_cast<std::uint32_t>(rng.next_below(m - i));
    const std::uint32_t vi = slot(i);
    const std::uint32_t vj = slot(j);
    out.push_back(vj);
    displaced[j] = vi;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ripkit
