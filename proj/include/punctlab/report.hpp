#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "punctlab/lipschitz.hpp"
#include "punctlab/metrics.hpp"
#include "punctlab/singularity.hpp"
#include "punctlab/zalcman.hpp"

namespace punctlab {

using json = nlohmann::ordered_json;

/// "start:end" walks down by factors of 10; otherwise a comma-separated list.
std::vector<double> parse_radii(std::string_view text);

/// A complex constant written as an expression, e.g. "0.3-0.2*i".
cplx parse_complex(std::string_view text);

/// Seed from PUNCTLAB_SEED, or 0 when unset.
std::uint64_t default_seed();

json to_json(cplx z);
json to_json(const SpherePoint& p);  // [re, im] or "inf"
json finite_or_null(double x);

json to_json(const LipEstimate& e);
json to_json(const InvarianceResult& r);
json to_json(const Verdict& v);
json to_json(const RescalingResult& r);
json to_json(const LVResult& r);
json to_json(const JuliaProfile& p);
json to_json(const DiameterProfile& p);
json to_json(const PrincipleResult& p);

/// Top-level report: version, command, fn, params, result, provenance.
json make_report(const std::string& command, const std::string& fn, json params, json result, json provenance);

/// Report without provenance.timing_ms, for reproducibility comparisons.
json strip_timing(json report);

}  // namespace punctlab
