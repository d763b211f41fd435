#ifndef ENTROLAB_SERIALIZATION_HPP
#define ENTROLAB_SERIALIZATION_HPP

#include <string>

#include <json.hpp>

#include "entrolab/measure_entropy.hpp"
#include "entrolab/sofic.hpp"
#include "entrolab/topological_entropy.hpp"

namespace entrolab {

using json = nlohmann::json;

// --- group elements -------------------------------------------------------
// Free-group elements serialize as words like "aB" (capital = inverse, "1"
// the identity); lattice elements as arrays of integers.
json element_to_json(const GroupElement& g);
GroupElement element_from_json(const GroupSpec& spec, const json& j);

json group_to_json(const GroupSpec& spec);
GroupSpec group_from_json(const json& j);

json subset_to_json(const FiniteSubset& f);
FiniteSubset subset_from_json(const GroupSpec& spec, const json& j);

// --- subshift description files -------------------------------------------
json subshift_to_json(const Subshift& s);
Subshift subshift_from_json(const json& j);
// Canonical form: sorted keys, forbidden patterns sorted canonically;
// bit-exact for hashing experiment inputs.
std::string canonical_subshift_dump(const Subshift& s);

// --- sofic maps ------------------------------------------------------------
// {"n": ..., "group": ..., "generators": {"a": [1-based images]},
//  "overrides": {"word": [1-based images]}}
json sofic_map_to_json(const SoficMap& m);
SoficMap sofic_map_from_json(const json& j);

// --- metric spaces ----------------------------------------------------------
json metric_space_to_json(const FiniteMetricSpace& m);
FiniteMetricSpace metric_space_from_json(const json& j);

// --- reports ----------------------------------------------------------------
json estimate_report_to_json(const EstimateReport& r);
json amplification_report_to_json(const AmplificationReport& r);
json product_report_to_json(const ProductSystemReport& r);
json quality_report_to_json(const QualityReport& r);
json extremal_result_to_json(const ExtremalSetResult& r);
json probe_report_to_json(const SeparationProbeReport& r);
json decomposition_to_json(const Decomposition& d);
json certification_to_json(const CertificationResult& r,
                           const std::vector<CertificationCheck>& checks);
json sofic_entropy_report_to_json(const SoficEntropyReport& r);

} // namespace entrolab

#endif
