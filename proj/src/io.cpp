#include "mlcake/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace mlcake {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "1";

Rational parse_rational_field(const ordered_json& j, const char* what) {
    if (!j.is_string()) throw validation_error(std::string(what) + " must be a rational string");
    return Rational::parse(j.get<std::string>());
}

ordered_json interval_to_json(const Interval& iv) {
    return ordered_json{{"lo", iv.lo.str()}, {"hi", iv.hi.str()}};
}

Interval interval_from_json(const ordered_json& j) {
    if (!j.is_object()) throw validation_error("interval must be an object with lo/hi");
    return Interval(parse_rational_field(j.at("lo"), "lo"),
                    parse_rational_field(j.at("hi"), "hi"));
}

} // namespace

Instance load_instance(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("instance is not valid JSON: ") + e.what());
    }
    try {
        Instance inst;
        for (const auto& layer : doc.at("layers")) inst.cake.layers.push_back(interval_from_json(layer));
        for (const auto& agent : doc.at("agents")) {
            Valuation v;
            const auto& layers = agent.at("layers");
            for (std::size_t l = 0; l < layers.size(); ++l) {
                std::vector<Rational> bps, vals;
                for (const auto& b : layers[l].at("breakpoints"))
                    bps.push_back(parse_rational_field(b, "breakpoint"));
                for (const auto& w : layers[l].at("values"))
                    vals.push_back(parse_rational_field(w, "value"));
                v.densities.emplace_back(std::move(bps), std::move(vals));
            }
            inst.agents.push_back(std::move(v));
        }
        validate_instance(inst);
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed instance document: ") + e.what());
    }
}

std::string save_instance(const Instance& inst) {
    ordered_json doc;
    doc["version"] = kVersion;
    doc["layers"] = ordered_json::array();
    for (const auto& layer : inst.cake.layers) doc["layers"].push_back(interval_to_json(layer));
    doc["agents"] = ordered_json::array();
    for (const auto& agent : inst.agents) {
        ordered_json layers = ordered_json::array();
        for (const auto& d : agent.densities) {
            ordered_json bps = ordered_json::array();
            for (const auto& b : d.breakpoints()) bps.push_back(b.str());
            ordered_json vals = ordered_json::array();
            for (const auto& w : d.values()) vals.push_back(w.str());
            layers.push_back(ordered_json{{"breakpoints", std::move(bps)}, {"values", std::move(vals)}});
        }
        doc["agents"].push_back(ordered_json{{"layers", std::move(layers)}});
    }
    return doc.dump(2) + "\n";
}

namespace {

ordered_json queries_to_json(const std::vector<QueryCounts>& queries) {
    ordered_json out = ordered_json::array();
    for (const auto& q : queries)
        out.push_back(ordered_json{{"short_eval", q.short_eval},
                                   {"short_cut", q.short_cut},
                                   {"long_eval", q.long_eval},
                                   {"long_cut", q.long_cut}});
    return out;
}

} // namespace

std::string save_allocation(const AllocationDocument& doc) {
    ordered_json j;
    j["version"] = kVersion;
    j["protocol"] = doc.protocol;
    j["certificate"] = doc.certificate;
    j["queries"] = queries_to_json(doc.queries);
    j["agents"] = ordered_json::array();
    for (const auto& piece : doc.allocation.pieces) {
        ordered_json layers = ordered_json::array();
        for (const auto& layer : piece.per_layer) {
            ordered_json intervals = ordered_json::array();
            for (const auto& iv : layer.intervals) intervals.push_back(interval_to_json(iv));
            layers.push_back(std::move(intervals));
        }
        j["agents"].push_back(std::move(layers));
    }
    return j.dump(2) + "\n";
}

std::string save_allocation(const Instance& inst, const ProtocolResult& result,
                            const std::string& protocol_id) {
    AllocationDocument doc{result.allocation, protocol_id,
                           certificate_name(result.certificate), result.transcript};
    (void)inst;
    return save_allocation(doc);
}

AllocationDocument load_allocation(const std::string& json_text, const LayeredCake& cake) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("allocation is not valid JSON: ") + e.what());
    }
    try {
        AllocationDocument doc;
        doc.protocol = j.value("protocol", "");
        doc.certificate = j.value("certificate", "");
        if (j.contains("queries")) {
            for (const auto& q : j.at("queries"))
                doc.queries.push_back(QueryCounts{q.at("short_eval").get<long long>(),
                                                  q.at("short_cut").get<long long>(),
                                                  q.at("long_eval").get<long long>(),
                                                  q.at("long_cut").get<long long>()});
        }
        doc.allocation.cake = cake;
        for (const auto& agent : j.at("agents")) {
            if (agent.size() != cake.m())
                throw validation_error("allocation layer count differs from cake");
            LayeredPiece piece(cake.m());
            for (std::size_t l = 0; l < cake.m(); ++l) {
                std::vector<Interval> ivs;
                for (const auto& iv : agent[l]) ivs.push_back(interval_from_json(iv));
                piece.per_layer[l] = normalize_piece(std::move(ivs));
            }
            doc.allocation.pieces.push_back(std::move(piece));
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed allocation document: ") + e.what());
    }
}

namespace {

ordered_json pairs_to_json(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    ordered_json out = ordered_json::array();
    for (const auto& [i, j] : pairs) out.push_back(ordered_json::array({i, j}));
    return out;
}

} // namespace

std::string save_report(const FairnessReport& report) {
    ordered_json j;
    j["proportional"] = report.proportional;
    j["envy_free"] = report.envy_free;
    j["equitable"] = report.equitable;
    j["exact"] = report.exact;
    j["structural"] = ordered_json{{"feasible", report.feasible},
                                   {"contiguous", report.contiguous},
                                   {"complete", report.complete}};
    ordered_json witnesses;
    witnesses["proportional"] = report.proportional_witnesses;
    witnesses["envy"] = pairs_to_json(report.envy_witnesses);
    witnesses["equitable"] = pairs_to_json(report.equitable_witnesses);
    witnesses["exact"] = pairs_to_json(report.exact_witnesses);
    witnesses["feasibility"] = report.feasibility_witnesses;
    witnesses["contiguity"] = report.contiguity_witnesses;
    witnesses["completeness"] = report.completeness_witnesses;
    j["witnesses"] = std::move(witnesses);
    return j.dump(2) + "\n";
}

namespace {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

} // namespace

Instance generate_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t cells) {
    if (n < 1 || m < 1 || cells < 1)
        throw validation_error("generator needs n, m, cells >= 1");
    SplitMix64 rng(seed ^ (0x9E37u + n * 1000003 + m * 10007 + cells * 101));
    Instance inst;
    inst.cake = full_cake(m);
    const long denom = static_cast<long>(cells) * 8;
    for (std::size_t i = 0; i < n; ++i) {
        Valuation v;
        Rational mass = 0;
        for (std::size_t l = 0; l < m; ++l) {
            std::set<long> interior;
            while (interior.size() + 1 < cells)
                interior.insert(static_cast<long>(rng.below(denom - 1)) + 1);
            std::vector<Rational> bps{0};
            for (const long k : interior) bps.emplace_back(k, denom);
            bps.emplace_back(1);
            std::vector<Rational> vals;
            for (std::size_t c = 0; c < cells; ++c)
                vals.emplace_back(static_cast<long>(rng.below(9)));
            v.densities.emplace_back(std::move(bps), std::move(vals));
            mass += v.densities.back().total();
        }
        if (mass.is_zero()) {
            // all-zero draw: give the last layer a uniform unit weight
            v.densities.back() = StepDensity::uniform(inst.cake.layers[m - 1], 1);
            mass = 1;
        }
        for (auto& d : v.densities) {
            std::vector<Rational> scaled;
            for (const auto& w : d.values()) scaled.push_back(w / mass);
            d = StepDensity(d.breakpoints(), std::move(scaled));
        }
        inst.agents.push_back(std::move(v));
    }
    validate_instance(inst);
    return inst;
}

namespace {

const char* agent_color(std::size_t i) {
    static constexpr const char* palette[] = {
        "#7fb2e5", "#f2a65a", "#8fd18f", "#e58a8a", "#b7a3e0", "#d9c36b",
        "#7fd6cf", "#e59ac4", "#a3b76b", "#9db3c7", "#cc9f86", "#89a8e0",
    };
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

} // namespace

std::string render_svg(const Instance& inst, const MultiAllocation& alloc) {
    constexpr double width = 900.0, band = 64.0, gap = 8.0;
    constexpr double left = 64.0, right = 24.0, top = 40.0, bottom = 16.0;
    const std::size_t m = inst.m();
    const double plot_w = width - left - right;
    const double height = top + m * band + (m - 1) * gap + bottom;
    const auto xpos = [&](const Rational& v) { return left + plot_w * v.to_double(); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <style>text{font-family:sans-serif;font-size:12px;}</style>\n";

    std::set<std::string> tick_labels;
    std::vector<Rational> ticks{Rational(0), Rational(1)};
    for (const auto& piece : alloc.pieces)
        for (const auto& layer : piece.per_layer)
            for (const auto& iv : layer.intervals) {
                ticks.push_back(iv.lo);
                ticks.push_back(iv.hi);
            }
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
    for (const auto& t : ticks) {
        const double x = xpos(t);
        svg << "  <line x1=\"" << x << "\" y1=\"" << top - 6 << "\" x2=\"" << x << "\" y2=\""
            << top << "\" stroke=\"#444\"/>\n";
        svg << "  <text x=\"" << x << "\" y=\"" << top - 10
            << "\" text-anchor=\"middle\">" << t.str() << "</text>\n";
    }

    for (std::size_t l = 0; l < m; ++l) {
        const double y0 = top + l * (band + gap);
        const Interval& layer = inst.cake.layers[l];
        svg << "  <text x=\"" << left - 40 << "\" y=\"" << y0 + band / 2 + 4 << "\">L"
            << l + 1 << "</text>\n";
        svg << "  <rect x=\"" << xpos(layer.lo) << "\" y=\"" << y0 << "\" width=\""
            << std::max(0.0, xpos(layer.hi) - xpos(layer.lo)) << "\" height=\"" << band
            << "\" fill=\"#f7f7f7\" stroke=\"#333\"/>\n";
        for (std::size_t i = 0; i < alloc.agents(); ++i) {
            for (const auto& iv : alloc.pieces[i].per_layer[l].intervals) {
                const double x0 = xpos(iv.lo), x1 = xpos(iv.hi);
                if (x1 <= x0) continue;
                svg << "  <rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0
                    << "\" height=\"" << band << "\" fill=\"" << agent_color(i)
                    << "\" stroke=\"#333\"/>\n";
                if (x1 - x0 > 26.0)
                    svg << "  <text x=\"" << (x0 + x1) / 2 << "\" y=\"" << y0 + band / 2 + 4
                        << "\" text-anchor=\"middle\">P" << i + 1 << l + 1 << "</text>\n";
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mlcake
