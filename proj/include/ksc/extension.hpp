#ifndef KSC_EXTENSION_HPP
#define KSC_EXTENSION_HPP

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace ksc {

struct ExtendedScenario {
    Scenario base;
    Scenario extended;
    std::map<std::string, std::vector<std::string>> split_map; // base atom -> fresh unit atoms
    std::vector<int> origin;       // extended atom -> base atom
    std::vector<int> context_map;  // base context -> extended context
};

inline std::string context_hash(const std::vector<std::string>& labels) {
    std::uint32_t h = 2166136261u;
    for (const auto& l : labels) {
        for (unsigned char ch : l) h = (h ^ ch) * 16777619u;
        h = (h ^ 0x1fu) * 16777619u;
    }
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", h);
    return buf;
}

// Splits every atom of dimension k into k unit atoms local to each context it lies in.
// The original atom survives as a coarse event when it is shared.
inline ExtendedScenario maximal_extension(const Scenario& s) {
    if (!s.has_dim()) fail(errc::no_dimension_function, "maximal extension needs a dimension function");
    ExtendedScenario e;
    e.base = s;
    const int m = s.num_contexts();

    std::vector<std::string> tags(m);
    for (int i = 0; i < m; ++i) {
        tags[i] = context_hash(context_labels(s, i));
        for (int j = 0; j < i; ++j)
            if (tags[j] == tags[i]) tags[i] += "-" + std::to_string(i);
    }
    // parts[i][p]: labels replacing the atom at position p of context i
    std::vector<std::vector<std::vector<std::string>>> parts(m);
    std::vector<std::string> atoms;
    std::map<std::string, int> origin;
    for (int i = 0; i < m; ++i)
        for (int a : s.contexts[i]) {
            std::vector<std::string> here;
            if (s.dim[a] == 1) {
                here.push_back(s.atoms[a]);
            } else {
                for (long k = 1; k <= s.dim[a]; ++k)
                    here.push_back(s.atoms[a] + "#" + std::to_string(k) + "@" + tags[i]);
                auto& list = e.split_map[s.atoms[a]];
                list.insert(list.end(), here.begin(), here.end());
            }
            for (const auto& l : here)
                if (origin.emplace(l, a).second) atoms.push_back(l);
            parts[i].push_back(std::move(here));
        }

    std::vector<std::vector<std::string>> contexts(m);
    for (int i = 0; i < m; ++i)
        for (const auto& here : parts[i]) contexts[i].insert(contexts[i].end(), here.begin(), here.end());

    auto flatten = [&](int i, const EventKey& key) {
        std::vector<std::string> out;
        for (int a : key) {
            const auto& here = parts[i][s.position(i, a)];
            out.insert(out.end(), here.begin(), here.end());
        }
        return out;
    };
    std::map<std::string, std::vector<std::vector<std::string>>> events;
    for (std::size_t a = 0; a < s.atoms.size(); ++a)
        if (s.dim[a] > 1 && s.atom_contexts[a].size() > 1)
            for (int i : s.atom_contexts[a]) events[s.atoms[a]].push_back(flatten(i, {static_cast<int>(a)}));
    for (const auto& [name, keys] : s.events)
        for (const auto& k : keys)
            for (int i : s.atom_contexts[k.front()])
                if (s.mask_of(i, k)) events[name].push_back(flatten(i, k));

    std::map<std::string, long> ones;
    for (const auto& l : atoms) ones[l] = 1;
    e.extended = make_scenario(atoms, contexts, events, ones, s.d);
    e.origin.resize(e.extended.atoms.size());
    for (std::size_t x = 0; x < e.extended.atoms.size(); ++x) e.origin[x] = origin.at(e.extended.atoms[x]);
    e.context_map.resize(m);
    for (int i = 0; i < m; ++i) {
        std::vector<int> ids;
        for (const auto& l : contexts[i]) ids.push_back(e.extended.atom_index(l));
        std::sort(ids.begin(), ids.end());
        e.context_map[i] = static_cast<int>(
            std::find(e.extended.contexts.begin(), e.extended.contexts.end(), ids) - e.extended.contexts.begin());
    }
    return e;
}

// Exclusivity graph of the extended scenario.
inline OrthoGraph extended_graph(const ExtendedScenario& e) { return orthogonality_graph(e.extended); }

} // namespace ksc

#endif
