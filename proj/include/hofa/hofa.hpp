#pragma once

// Umbrella header: the whole library in dependency order.

#include "hofa/common.hpp"
#include "hofa/rng.hpp"
#include "hofa/field.hpp"
#include "hofa/tvalue.hpp"
#include "hofa/affine.hpp"
#include "hofa/function.hpp"
#include "hofa/fourier.hpp"
#include "hofa/linear_forms.hpp"
#include "hofa/gowers.hpp"
#include "hofa/polynomial.hpp"
#include "hofa/rank.hpp"
#include "hofa/factored.hpp"
#include "hofa/factor.hpp"
#include "hofa/decompose.hpp"
#include "hofa/restriction.hpp"
#include "hofa/upsilon.hpp"
#include "hofa/tprofile.hpp"
#include "hofa/property.hpp"
#include "hofa/estimate.hpp"
