#include "modelspace/projective.hpp"

#include <cctype>
#include <map>

namespace modelspace {

std::string to_string(SpaceKind k)
{
    switch (k) {
    case SpaceKind::Ell: return "Ell";
    case SpaceKind::Hyp: return "Hyp";
    case SpaceKind::dS: return "dS";
    case SpaceKind::AdS: return "AdS";
    case SpaceKind::Euc: return "Euc";
    case SpaceKind::Min: return "Min";
    case SpaceKind::coEuc: return "coEuc";
    case SpaceKind::coMin: return "coMin";
    }
    return "?";
}

Space parse_space(const std::string& name)
{
    static const std::map<std::string, SpaceKind> kinds = {
        {"Ell", SpaceKind::Ell},     {"Hyp", SpaceKind::Hyp},   {"dS", SpaceKind::dS},
        {"AdS", SpaceKind::AdS},     {"Euc", SpaceKind::Euc},   {"Min", SpaceKind::Min},
        {"coEuc", SpaceKind::coEuc}, {"coMin", SpaceKind::coMin}};
    std::size_t i = name.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
    const std::string prefix = name.substr(0, i);
    const std::string digits = name.substr(i);
    const auto it = kinds.find(prefix);
    require(it != kinds.end() && !digits.empty() && digits.size() < 3,
            "unknown space '" + name + "' (expected e.g. Ell2, Hyp3, dS2, AdS3, coEuc3, coMin3)");
    return Space::make(it->second, std::stoi(digits));
}

}  // namespace modelspace
