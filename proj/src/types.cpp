#include "scispace/types.hpp"

#include <algorithm>

namespace scispace {

Metric metric_from_string(const std::string& s) {
    if (s == "documents" || s == "publications") return Metric::documents;
    if (s == "citations") return Metric::citations;
    fail(ErrorCode::InvalidConfig, "unknown metric '" + s + "' (expected documents|citations)");
}

std::shared_ptr<const Catalogs> Catalogs::make(std::vector<std::string> countries,
                                               std::vector<std::string> disciplines) {
    auto cat = std::make_shared<Catalogs>();
    std::sort(countries.begin(), countries.end());
    countries.erase(std::unique(countries.begin(), countries.end()), countries.end());
    std::sort(disciplines.begin(), disciplines.end());
    disciplines.erase(std::unique(disciplines.begin(), disciplines.end()), disciplines.end());
    cat->countries = std::move(countries);
    cat->disciplines = std::move(disciplines);
    for (int i = 0; i < cat->n_countries(); ++i) cat->country_index[cat->countries[i]] = i;
    for (int i = 0; i < cat->n_disciplines(); ++i) cat->discipline_index[cat->disciplines[i]] = i;
    return cat;
}

int Catalogs::country(const std::string& id) const {
    auto it = country_index.find(id);
    return it == country_index.end() ? -1 : it->second;
}

int Catalogs::discipline(const std::string& id) const {
    auto it = discipline_index.find(id);
    return it == discipline_index.end() ? -1 : it->second;
}

} // namespace scispace
