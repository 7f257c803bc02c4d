#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "scispace/errors.hpp"

namespace scispace {

enum class Metric { documents, citations };

inline const char* metric_name(Metric m) {
    return m == Metric::documents ? "documents" : "citations";
}

Metric metric_from_string(const std::string& s);

// Shared country/discipline id spaces. Ids are kept sorted so that every
// derived object (totals, RCA slices, proximity matrices, ...) indexes the
// same way regardless of input row order.
struct Catalogs {
    std::vector<std::string> countries;
    std::vector<std::string> disciplines;
    std::unordered_map<std::string, int> country_index;
    std::unordered_map<std::string, int> discipline_index;

    static std::shared_ptr<const Catalogs> make(std::vector<std::string> countries,
                                                std::vector<std::string> disciplines);

    int country(const std::string& id) const;     // -1 if unknown
    int discipline(const std::string& id) const;  // -1 if unknown
    int n_countries() const { return static_cast<int>(countries.size()); }
    int n_disciplines() const { return static_cast<int>(disciplines.size()); }

    bool operator==(const Catalogs& other) const {
        return countries == other.countries && disciplines == other.disciplines;
    }
};

using CatalogsPtr = std::shared_ptr<const Catalogs>;

// True when both handles describe the same id spaces (pointer or content).
inline bool same_catalogs(const CatalogsPtr& a, const CatalogsPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

} // namespace scispace
