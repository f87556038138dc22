#pragma once

#include <iosfwd>
#include <string>

#include "slt/engine.hpp"
#include "slt/model.hpp"

namespace slt {

/// Parse a model from its JSON file form:
/// {states, P, pi?, nu?, metric ("discrete" or matrix), beta?, phi?, gamma?}
TransitionModel load_model_json(const std::string& text);
TransitionModel load_model_file(const std::string& path);

/// CSV dumps: trace rows (step, site, xi, height) and curve rows (site, G).
void write_trace_csv(std::ostream& os, const SltTrace& trace,
                     const TransitionModel& model);
void write_curve_csv(std::ostream& os, const SltTrace& trace,
                     const TransitionModel& model);

}  // namespace slt
