#pragma once
// Canonical JSON forms for every domain type. All emitters use ordered JSON
// (insertion-ordered keys) and shortest-round-trip number formatting, so a
// given value always serializes to the same bytes — reports are diffable and
// reruns are byte-comparable.

#include "json.hpp"
#include "slpi/ensemble.hpp"
#include "slpi/green.hpp"
#include "slpi/model.hpp"
#include "slpi/oscillation.hpp"
#include "slpi/shoot.hpp"
#include "slpi/spectra.hpp"

namespace slpi {

using Json = nlohmann::ordered_json;

// model
Json to_json(const Interval&, bool halfline = false);
Json to_json(const PotentialSpec&);
Json to_json(const InteractionSite&);
Json to_json(const InteractionSet&);
Json to_json(const BoundaryCondition&);
Json to_json(const CouplingVector&);
Json to_json(const Distribution&);
Json to_json(const EnsembleSpec&);
Json to_json(const Tolerances&);
Json to_json(const ValidationReport&);

Interval interval_from_json(const Json&, bool* halfline = nullptr);
PotentialSpec potential_from_json(const Json&);
InteractionSet interactions_from_json(const Json&);
BoundaryCondition boundary_from_json(const Json&);
CouplingVector coupling_from_json(const Json&);
Distribution distribution_from_json(const Json&);
EnsembleSpec ensemble_from_json(const Json&);
Tolerances tolerances_from_json(const Json&);

// propagate / green / spectra / oscillation / random
Json to_json(const SolutionTrace&);
Json to_json(const GreenValue&);
Json to_json(const MatchingValue&);
Json to_json(const SpectralReport&);
Json to_json(const DichotomyVerdict&);
Json to_json(const OscillationCertificate&);
Json to_json(const ConsistencyReport&);
Json to_json(const MonteCarloResult&);
Json to_json(const ScanReport&);

const char* kind_name(InteractionKind);
InteractionKind kind_from_name(const std::string&);

}  // namespace slpi
