// JSON reports and certificates for the pipeline results.

#pragma once

#include "quatuniv/pipeline.hpp"
#include "quatuniv/serialize.hpp"

namespace quatuniv {

Json to_json(const ResidueRing& ring, const ResidueQuaternions& rq, const OrbitSet& orbits);
Json to_json(const SuitabilityCertificate& c);
/// Self-contained: carries the field spec and order so `check` can rebuild them.
Json suitability_document(const Order& order, const SuitabilityCertificate& c);
Json pid_document(const Order& order, const PidCertificate& c);
Json universality_document(const Order& order, const UniversalityCertificate& c);
Json to_json(const RepresentationReport& r);
Json to_json(const ThetaCertificate& c);
Json to_json(const MultipleRepresentation& m);

}  // namespace quatuniv
