#ifndef HKB_HKB_HPP
#define HKB_HKB_HPP

// Umbrella header for the library (the command layer lives in hkb/cli.hpp).

#include "hkb/analysis.hpp"
#include "hkb/bounds.hpp"
#include "hkb/classify.hpp"
#include "hkb/constructions.hpp"
#include "hkb/equivalence.hpp"
#include "hkb/error.hpp"
#include "hkb/gf.hpp"
#include "hkb/linalg.hpp"
#include "hkb/parallel.hpp"
#include "hkb/poly.hpp"
#include "hkb/projgeo.hpp"
#include "hkb/random.hpp"
#include "hkb/report.hpp"

#endif  // HKB_HKB_HPP
