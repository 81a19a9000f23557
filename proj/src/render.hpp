#pragma once

#include <string>

#include "capacity.hpp"
#include "oracle.hpp"
#include "runconfig.hpp"
#include "synth.hpp"

namespace ska {

// Machine output is a single self-describing JSON document with a fixed key
// order: tool version, seed, caps, source digest, then the payload. The
// worker count is deliberately not echoed, so identical inputs render
// byte-identically no matter how the work was split.
std::string render_analysis(const AnalysisResult& res, const RunConfig& cfg);
std::string render_verification(const VerificationReport& rep, const RunConfig& cfg,
                                const std::string& source_digest);
std::string render_reduction(const ReductionChain& chain, const RunConfig& cfg,
                             const std::string& source_digest);

}  // namespace ska
