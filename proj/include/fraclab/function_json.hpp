#pragma once

#include <string>

#include <json.hpp>

#include "fraclab/functions.hpp"

namespace fraclab {

// JSON schema, one object per spec, field "kind" selects the variant:
//   {"kind":"ball","center":[...],"radius":r}
//   {"kind":"box","corner":[...],"sides":[...]}
//   {"kind":"simple","dim":d,"terms":[{"coefficient":c,"set":<ball|box>}, ...]}
//   {"kind":"radial_power_log","dim":d,"alpha":a,"kappa":k,"cutoff":c,"center":[...]}
//   {"kind":"smooth_bump","dim":d,"scale":t,"p":p|"inf","center":[...]}
//   {"kind":"grid","origin":[...],"spacing":h,"shape":[...],"values":[...]}
// "center" is optional (origin). Unknown keys are rejected.
nlohmann::json to_json(const FunctionSpec& f);
FunctionSpec spec_from_json(const nlohmann::json& j);

// Short command-line forms in dimension d:
//   ball:c_1,...,c_d,r    box:c_1,...,c_d,s_1,...,s_d    zero
//   h  (make_h with default_alpha)    h:alpha
//   powerlog:alpha,kappa,cutoff    bump:t,p  (p may be inf)
//   json:PATH   or a literal JSON object
FunctionSpec parse_function_arg(const std::string& text, int d, double default_alpha);

double parse_exponent(const std::string& text);

}  // namespace fraclab
