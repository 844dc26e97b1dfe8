#pragma once

#include "ca_structure.hpp"
#include "ra_core.hpp"

#include <json.hpp>

#include <string>

namespace atomlab
{
    /// Structure documents. An RA document's "consistent" is its rule when it has one,
    /// otherwise the list of consistent triples. CA documents always carry full tables.
    auto ra_to_json(const RaAtomStructure & s) -> nlohmann::json;
    auto ra_from_json(const nlohmann::json & j) -> RaAtomStructure;
    auto ca_to_json(const CaAtomStructure & f) -> nlohmann::json;
    auto ca_from_json(const nlohmann::json & j) -> CaAtomStructure;

    /// "type" of a document, or "" when missing.
    auto document_type(const nlohmann::json & j) -> std::string;

    /// Parses a file. Throws StructuralError on I/O or syntax errors.
    auto read_json_file(const std::string & path) -> nlohmann::json;
    /// Pretty-printed with sorted keys and a trailing newline, so output is byte-stable.
    void write_json_file(const std::string & path, const nlohmann::json & j);
}
