#ifndef BHC_BHC_HPP
#define BHC_BHC_HPP

#include "bhc/family.hpp"
#include "bhc/norms.hpp"
#include "bhc/poly.hpp"
#include "bhc/poly_json.hpp"
#include "bhc/witness.hpp"

#endif  // BHC_BHC_HPP
