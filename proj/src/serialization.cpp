#include "entrolab/serialization.hpp"

#include <algorithm>

namespace entrolab {

namespace {

std::string generator_name(int index) {
    return std::string(1, static_cast<char>('a' + index));
}

int generator_index(const std::string& name, const GroupSpec& spec) {
    if (name.size() != 1 || name[0] < 'a' || name[0] > 'z')
        throw ArgumentError("expected a single-letter generator name, got '" + name + "'");
    int idx = name[0] - 'a';
    if (idx >= spec.rank) throw ArgumentError("generator '" + name + "' exceeds the group rank");
    return idx;
}

std::vector<std::uint32_t> perm_from_json(const json& j, std::size_t n, const char* what) {
    if (!j.is_array() || j.size() != n)
        throw ArgumentError(std::string(what) + ": expected an array of " + std::to_string(n) +
                            " images");
    std::vector<std::uint32_t> p;
    p.reserve(n);
    for (const auto& v : j) {
        std::int64_t x = v.get<std::int64_t>();
        if (x < 1 || x > static_cast<std::int64_t>(n))
            throw ArgumentError(std::string(what) + ": image out of range (images are 1-based)");
        p.push_back(static_cast<std::uint32_t>(x - 1));
    }
    return p;
}

json perm_to_json(const std::vector<std::uint32_t>& p) {
    json arr = json::array();
    for (std::uint32_t v : p) arr.push_back(v + 1);
    return arr;
}

} // namespace

json element_to_json(const GroupElement& g) {
    if (g.spec().kind == GroupKind::Free) return g.to_string();
    json arr = json::array();
    for (std::int64_t v : g.coords()) arr.push_back(v);
    return arr;
}

GroupElement element_from_json(const GroupSpec& spec, const json& j) {
    if (j.is_string()) return GroupElement::parse(spec, j.get<std::string>());
    if (j.is_array()) {
        std::vector<std::int64_t> coords;
        for (const auto& v : j) coords.push_back(v.get<std::int64_t>());
        return GroupElement::from_coords(spec, std::move(coords));
    }
    if (j.is_number_integer() && spec.kind == GroupKind::Lattice && spec.rank == 1)
        return GroupElement::from_coords(spec, {j.get<std::int64_t>()});
    throw ArgumentError("cannot parse group element from JSON value " + j.dump());
}

json group_to_json(const GroupSpec& spec) {
    if (spec.kind == GroupKind::Free) return json{{"free", spec.rank}};
    return json{{"lattice", spec.rank}};
}

GroupSpec group_from_json(const json& j) {
    if (!j.is_object()) throw ArgumentError("group: expected {\"free\": k} or {\"lattice\": d}");
    if (j.contains("free")) return GroupSpec::free_group(j.at("free").get<int>());
    if (j.contains("lattice")) return GroupSpec::lattice(j.at("lattice").get<int>());
    throw ArgumentError("group: expected {\"free\": k} or {\"lattice\": d}");
}

json subset_to_json(const FiniteSubset& f) {
    json arr = json::array();
    for (const GroupElement& g : f.elements()) arr.push_back(element_to_json(g));
    return arr;
}

FiniteSubset subset_from_json(const GroupSpec& spec, const json& j) {
    if (!j.is_array()) throw ArgumentError("subset: expected an array of elements");
    std::vector<GroupElement> elems;
    for (const auto& v : j) elems.push_back(element_from_json(spec, v));
    return FiniteSubset::of(spec, std::move(elems));
}

json subshift_to_json(const Subshift& s) {
    json out;
    out["alphabet"] = s.alphabet;
    out["group"] = group_to_json(s.group);
    json forb = json::array();
    for (const Pattern& p : s.forbidden) {
        json shape = json::array();
        json labels = json::array();
        for (std::size_t i = 0; i < p.shape.size(); ++i) {
            shape.push_back(element_to_json(p.shape[i]));
            labels.push_back(s.alphabet[static_cast<std::size_t>(p.labels[i])]);
        }
        forb.push_back(json{{"shape", shape}, {"labels", labels}});
    }
    out["forbidden"] = forb;
    return out;
}

Subshift subshift_from_json(const json& j) {
    if (!j.is_object()) throw ArgumentError("subshift: expected an object");
    for (const char* key : {"alphabet", "group"})
        if (!j.contains(key))
            throw ArgumentError(std::string("subshift: missing field '") + key + "'");
    GroupSpec spec = group_from_json(j.at("group"));
    std::vector<std::string> alphabet = j.at("alphabet").get<std::vector<std::string>>();
    std::vector<Pattern> forbidden;
    if (j.contains("forbidden")) {
        for (const auto& pj : j.at("forbidden")) {
            if (!pj.contains("shape") || !pj.contains("labels"))
                throw ArgumentError("subshift: forbidden entries need 'shape' and 'labels'");
            const json& shape_j = pj.at("shape");
            const json& labels_j = pj.at("labels");
            if (shape_j.size() != labels_j.size())
                throw ArgumentError("subshift: forbidden shape/labels length mismatch");
            // Keep (element, label) pairs aligned through canonical sorting.
            std::vector<std::pair<GroupElement, int>> entries;
            for (std::size_t i = 0; i < shape_j.size(); ++i) {
                GroupElement g = element_from_json(spec, shape_j[i]);
                std::string letter = labels_j[i].get<std::string>();
                auto it = std::find(alphabet.begin(), alphabet.end(), letter);
                if (it == alphabet.end())
                    throw ArgumentError("subshift: forbidden label '" + letter +
                                        "' is not in the alphabet");
                entries.emplace_back(std::move(g),
                                     static_cast<int>(it - alphabet.begin()));
            }
            std::sort(entries.begin(), entries.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t i = 1; i < entries.size(); ++i)
                if (entries[i].first == entries[i - 1].first)
                    throw ArgumentError("subshift: duplicate coordinate in forbidden shape");
            std::vector<GroupElement> shape;
            std::vector<int> labels;
            for (auto& [g, l] : entries) {
                shape.push_back(std::move(g));
                labels.push_back(l);
            }
            forbidden.emplace_back(FiniteSubset::of(spec, std::move(shape)), std::move(labels));
        }
    }
    return Subshift(spec, std::move(alphabet), std::move(forbidden));
}

std::string canonical_subshift_dump(const Subshift& s) {
    // Normalize: forbidden patterns sorted by (shape, labels) canonically.
    std::vector<std::pair<std::string, json>> forb;
    json base = subshift_to_json(s);
    for (const auto& p : base.at("forbidden")) forb.emplace_back(p.dump(), p);
    std::sort(forb.begin(), forb.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    json canon;
    canon["alphabet"] = base.at("alphabet");
    canon["group"] = base.at("group");
    json arr = json::array();
    for (auto& [_, p] : forb) arr.push_back(p);
    canon["forbidden"] = arr;
    return canon.dump();
}

json sofic_map_to_json(const SoficMap& m) {
    json out;
    out["n"] = m.size();
    out["group"] = group_to_json(m.spec());
    json gens;
    for (std::size_t i = 0; i < m.generator_perms().size(); ++i)
        gens[generator_name(static_cast<int>(i))] = perm_to_json(m.generator_perms()[i]);
    out["generators"] = gens;
    if (!m.overrides().empty()) {
        json ov;
        for (const auto& [g, p] : m.overrides()) ov[g.to_string()] = perm_to_json(p);
        out["overrides"] = ov;
    }
    return out;
}

SoficMap sofic_map_from_json(const json& j) {
    if (!j.is_object()) throw ArgumentError("sofic map: expected an object");
    for (const char* key : {"n", "group", "generators"})
        if (!j.contains(key))
            throw ArgumentError(std::string("sofic map: missing field '") + key + "'");
    GroupSpec spec = group_from_json(j.at("group"));
    std::size_t n = j.at("n").get<std::size_t>();
    std::vector<std::vector<std::uint32_t>> gens(static_cast<std::size_t>(spec.rank));
    std::vector<bool> have(static_cast<std::size_t>(spec.rank), false);
    for (const auto& [name, arr] : j.at("generators").items()) {
        int idx = generator_index(name, spec);
        gens[static_cast<std::size_t>(idx)] = perm_from_json(arr, n, "sofic map generator");
        have[static_cast<std::size_t>(idx)] = true;
    }
    for (int i = 0; i < spec.rank; ++i)
        if (!have[static_cast<std::size_t>(i)])
            throw ArgumentError("sofic map: missing permutation for generator '" +
                                generator_name(i) + "'");
    std::map<GroupElement, std::vector<std::uint32_t>> overrides;
    if (j.contains("overrides")) {
        for (const auto& [word, arr] : j.at("overrides").items())
            overrides[GroupElement::parse(spec, word)] =
                perm_from_json(arr, n, "sofic map override");
    }
    return SoficMap::explicit_map(spec, n, std::move(gens), std::move(overrides));
}

json metric_space_to_json(const FiniteMetricSpace& m) {
    json out;
    out["points"] = m.point_labels();
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j2 = 0; j2 < m.size(); ++j2) row.push_back(m.dist(i, j2));
        rows.push_back(row);
    }
    out["dist"] = rows;
    return out;
}

FiniteMetricSpace metric_space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("points") || !j.contains("dist"))
        throw ArgumentError("metric space: expected {\"points\": [...], \"dist\": [[...]]}");
    std::vector<std::string> labels = j.at("points").get<std::vector<std::string>>();
    std::vector<std::vector<double>> dist;
    for (const auto& row : j.at("dist")) dist.push_back(row.get<std::vector<double>>());
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

json estimate_report_to_json(const EstimateReport& r) {
    json rows = json::array();
    for (const EstimateRow& row : r.rows)
        rows.push_back(json{{"label", row.label},
                            {"size", row.set_size},
                            {"value_nats", row.value_nats},
                            {"running_min", row.running_min},
                            {"bound_kind", to_string(row.value_kind)}});
    return json{{"rows", rows},
                {"final_value", r.final_value},
                {"final_bound_kind", to_string(r.final_kind)},
                {"notes", r.notes}};
}

json amplification_report_to_json(const AmplificationReport& r) {
    json rows = json::array();
    for (const AmplificationRow& row : r.rows) {
        json rj{{"label", row.label},
                {"f_size", row.f_size},
                {"wf_size", row.wf_size},
                {"ratio", row.ratio.to_string()},
                {"ratio_value", row.ratio.to_double()},
                {"analytic_value", row.analytic_value},
                {"bound_kind", "exact"},
                {"agrees", row.agrees}};
        if (row.enumerated_value) rj["enumerated_value"] = *row.enumerated_value;
        rows.push_back(rj);
    }
    return json{{"rows", rows}, {"tolerance", r.tolerance}, {"notes", r.notes}};
}

json product_report_to_json(const ProductSystemReport& r) {
    json rows = json::array();
    for (const ProductSystemRow& row : r.rows)
        rows.push_back(json{{"label", row.label},
                            {"f_size", row.f_size},
                            {"product_value", row.product_value},
                            {"sum_of_parts", row.sum_of_parts},
                            {"bound_kind", "exact"},
                            {"agrees", row.agrees}});
    return json{{"rows", rows}, {"tolerance", r.tolerance}};
}

json quality_report_to_json(const QualityReport& r) {
    auto pair_rows = [](const std::vector<PairFraction>& pairs) {
        json arr = json::array();
        for (const PairFraction& p : pairs)
            arr.push_back(json{{"g1", p.g1.to_string()},
                               {"g2", p.g2.to_string()},
                               {"fraction", p.fraction}});
        return arr;
    };
    return json{{"multiplicativity", pair_rows(r.multiplicativity)},
                {"freeness", pair_rows(r.freeness)},
                {"min_multiplicativity", r.min_multiplicativity},
                {"min_freeness", r.min_freeness},
                {"consistent_fraction", r.consistent_fraction},
                {"bound_kind", "exact"}};
}

json extremal_result_to_json(const ExtremalSetResult& r) {
    return json{{"value", r.value}, {"witness", r.witness}, {"bound_kind", to_string(r.kind)}};
}

json probe_report_to_json(const SeparationProbeReport& r) {
    json rows = json::array();
    for (const SeparationProbeRow& row : r.rows)
        rows.push_back(json{{"label", row.label},
                            {"f_size", row.f_size},
                            {"sample_size", row.sample_size},
                            {"sep", row.sep},
                            {"sep_bound_kind", to_string(row.sep_kind)},
                            {"value_nats", row.value_nats},
                            {"bound_kind", "heuristic"}});
    return json{{"rows", rows},
                {"cover_estimate", estimate_report_to_json(r.cover_estimate)},
                {"exhaustive_sample", r.exhaustive_sample},
                {"radius", r.radius},
                {"notes", r.notes}};
}

json decomposition_to_json(const Decomposition& d) {
    json blocks = json::array();
    for (const DecompositionBlock& b : d.blocks) {
        json fp = json::array();
        for (const GroupElement& g : b.f_part) fp.push_back(g.to_string());
        blocks.push_back(json{{"center", b.center + 1}, // 1-based like the map files
                              {"f_part", fp},
                              {"points", [&] {
                                   json arr = json::array();
                                   for (std::uint32_t p : b.points) arr.push_back(p + 1);
                                   return arr;
                               }()}});
    }
    json leftover = json::array();
    for (std::uint32_t p : d.leftover) leftover.push_back(p + 1);
    return json{{"blocks", blocks},
                {"leftover", leftover},
                {"covered", d.covered},
                {"checks",
                 json{{"blocks_disjoint", d.blocks_disjoint},
                      {"block_sizes_ok", d.block_sizes_ok},
                      {"greedy_maximal", d.greedy_maximal},
                      {"interior_count_ok", d.interior_count_ok}}}};
}

json certification_to_json(const CertificationResult& r,
                           const std::vector<CertificationCheck>& checks) {
    json out;
    out["available"] = r.available;
    if (!r.diagnosis.empty()) out["diagnosis"] = r.diagnosis;
    if (r.params) {
        const CertificationParameters& p = *r.params;
        json pj{{"rate", p.rate},
                {"epsilon", p.epsilon},
                {"eta", p.eta},
                {"block_divisor", p.block_divisor},
                {"window", subset_to_json(p.window)},
                {"window_size", p.window.size()},
                {"delta", p.delta},
                {"required_consistency", p.required_consistency}};
        if (p.stable_n) pj["stable_n"] = *p.stable_n;
        out["params"] = pj;
    }
    if (!checks.empty()) {
        json arr = json::array();
        for (const CertificationCheck& c : checks)
            arr.push_back(json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
        out["checks"] = arr;
    }
    return out;
}

json sofic_entropy_report_to_json(const SoficEntropyReport& r) {
    json rows = json::array();
    for (const SoficEntropyRow& row : r.rows)
        rows.push_back(json{{"n", row.n},
                            {"microstates", row.microstates},
                            {"sep", row.sep},
                            {"sep_bound_kind", to_string(row.sep_kind)},
                            {"value_nats", row.value_nats},
                            {"bound_kind", to_string(row.sep_kind)}});
    json out{{"rows", rows},
             {"n_floor", r.n_floor},
             {"radius", r.radius},
             {"tail_valid", r.tail_valid},
             {"notes", r.notes}};
    if (r.tail_valid) out["tail_max"] = r.tail_max;
    return out;
}

} // namespace entrolab
