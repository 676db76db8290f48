#include "unirec/sdt/specials.hpp"

namespace unirec::sdt {

std::vector<SpecialSplit> split_specials(std::string_view s,
                                         std::span<const std::string_view> surfaces) {
  std::vector<SpecialSplit> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    int hit = -1;
    std::size_t hit_len = 0;
    for (std::size_t k = 0; k < surfaces.size(); ++k) {
      const std::string_view sp = surfaces[k];
      if (!sp.empty() && sp.size() > hit_len && s[i] == sp[0] && s.compare(i, sp.size(), sp) == 0) {
        hit = static_cast<int>(k);
        hit_len = sp.size();
      }
    }
    if (hit < 0) {
      ++i;
      continue;
    }
    if (i > start) out.push_back({s.substr(start, i - start), -1});
    out.push_back({s.substr(i, hit_len), hit});
    i += hit_len;
    start = i;
  }
  if (start < s.size()) out.push_back({s.substr(start), -1});
  return out;
}

}  // namespace unirec::sdt
