#pragma once

#include <string>
#include <vector>

#include "itershadow/bound_calculator.hpp"
#include "itershadow/experiments.hpp"
#include "itershadow/johnson_spectra.hpp"
#include "itershadow/kruskal_katona.hpp"
#include "itershadow/lfam_io.hpp"
#include "itershadow/subcube.hpp"
#include "itershadow/verify.hpp"

namespace itershadow {

enum class Format { kCsv, kJson };

Format parse_format(const std::string& text);

/// Round-trip decimal rendering (%.17g).
std::string format_double(double x);

// Every renderer returns the whole document, newline-terminated. Exact measures
// appear twice: as a fraction string and as its double approximation.
std::string render_family(const LfamManifest& manifest, const Rational& measure, const std::string& spec, Format f);
std::string render_exact(const std::vector<ExactRow>& rows, Format f);
std::string render_mc(const std::vector<McRow>& rows, Format f);
std::string render_spectrum(const SpectrumReport& rep, Format f);
std::string render_kk(const KKBound& b, int n, int r, Format f);
std::string render_bound(const BoundReport& rep);
std::string render_pipeline(const PipelineResult& res, Format f);
std::string render_conjecture(const std::vector<ConjectureRow>& rows, Format f);
std::string render_scaling(const std::vector<ScalingRow>& rows, Format f);
std::string render_verify(const VerifyReport& rep, Format f);

}  // namespace itershadow
