#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cfguard {

using ColourId = int;

struct ColouredGuarding {
    std::map<std::size_t, ColourId> assignments;  // vertex -> colour

    std::vector<ColourId> palette() const {
        std::set<ColourId> s;
        for (auto& [v, c] : assignments) s.insert(c);
        return {s.begin(), s.end()};
    }
    std::size_t palette_size() const { return palette().size(); }
    std::vector<std::size_t> guards() const {
        std::vector<std::size_t> out;
        for (auto& [v, c] : assignments) out.push_back(v);
        return out;
    }
};

}  // namespace cfguard
