#pragma once

// Generalized Koch curves driven by generalized Thue-Morse sign sequences:
// sequence construction, polygonal approximations, the associated iterated
// function system and substitution morphism, verification checks, and
// SVG/CSV output.

#include "analysis.hpp"
#include "check_report.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "ifs.hpp"
#include "morphism.hpp"
#include "polygon.hpp"
#include "render.hpp"
#include "sign_pattern.hpp"
