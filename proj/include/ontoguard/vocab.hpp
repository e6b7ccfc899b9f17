#pragma once

#include <string>
#include <string_view>

// Namespace bases and well-known IRIs shared by the ontologies, the ingester
// and the validator. The bundled ontology/prefixes.ttl declares the same map.
namespace ontoguard::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kObo = "http://purl.obolibrary.org/obo/";
inline constexpr std::string_view kDomain = "https://w3id.org/ontoguard/domain#";
inline constexpr std::string_view kQuality = "https://w3id.org/ontoguard/quality#";
inline constexpr std::string_view kMls = "http://www.w3.org/ns/mls#";
inline constexpr std::string_view kImage = "https://w3id.org/ontoguard/image/";

inline std::string iri(std::string_view base, std::string_view local) {
  std::string out(base);
  out += local;
  return out;
}

inline std::string rdf(std::string_view l) { return iri(kRdf, l); }
inline std::string rdfs(std::string_view l) { return iri(kRdfs, l); }
inline std::string owl(std::string_view l) { return iri(kOwl, l); }
inline std::string xsd(std::string_view l) { return iri(kXsd, l); }
inline std::string obo(std::string_view l) { return iri(kObo, l); }
inline std::string domain(std::string_view l) { return iri(kDomain, l); }
inline std::string quality(std::string_view l) { return iri(kQuality, l); }

inline std::string rdf_type() { return rdf("type"); }
inline std::string subclass_of() { return rdfs("subClassOf"); }

// BFO / RO relation identifiers.
inline std::string part_of() { return obo("BFO_0000050"); }
inline std::string has_part() { return obo("BFO_0000051"); }
inline std::string contained_in() { return obo("RO_0001018"); }
inline std::string contains() { return obo("RO_0001019"); }

/// Maps the figure spelling `BF0_nnnnnnn` (digit zero) in the OBO namespace to
/// the canonical `BFO_nnnnnnn`. Any other IRI is returned unchanged.
inline std::string normalize_obo(std::string iri_text) {
  if (iri_text.size() != kObo.size() + 11 || iri_text.compare(0, kObo.size(), kObo) != 0)
    return iri_text;
  std::string_view local(iri_text.data() + kObo.size(), 11);
  if (local.substr(0, 4) != "BF0_") return iri_text;
  for (char c : local.substr(4))
    if (c < '0' || c > '9') return iri_text;
  iri_text[kObo.size() + 2] = 'O';
  return iri_text;
}

}  // namespace ontoguard::vocab
