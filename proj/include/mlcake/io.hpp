#pragma once

#include <cstdint>
#include <string>

#include "mlcake/protocols.hpp"
#include "mlcake/verify.hpp"

namespace mlcake {

// Instance documents: {"version":"1","layers":[{"lo","hi"}...],
// "agents":[{"layers":[{"breakpoints":[...],"values":[...]},...]},...]}
// with every number a rational string "p/q". Loading validates
// normalization and rejects bad documents with the offending agent named.
Instance load_instance(const std::string& json_text);
std::string save_instance(const Instance& inst);

struct AllocationDocument {
    MultiAllocation allocation;
    std::string protocol;
    std::string certificate;
    std::vector<QueryCounts> queries;
};

std::string save_allocation(const AllocationDocument& doc);
std::string save_allocation(const Instance& inst, const ProtocolResult& result,
                            const std::string& protocol_id);
// The cake is needed to size and normalize the per-layer pieces.
AllocationDocument load_allocation(const std::string& json_text, const LayeredCake& cake);

std::string save_report(const FairnessReport& report);

// Deterministic instance over m full layers: `cells` density cells per
// layer with random breakpoints and integer weights, renormalized so every
// agent totals exactly 1. A pure function of its arguments.
Instance generate_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t cells);

// Stacked-layer drawing of an allocation: one band per layer, pieces
// colored per agent and labeled P_il, cut coordinates ticked on top.
std::string render_svg(const Instance& inst, const MultiAllocation& alloc);

} // namespace mlcake
