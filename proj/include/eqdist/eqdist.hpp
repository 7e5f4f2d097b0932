#pragma once

#include "eqdist/arith/checked.hpp"
#include "eqdist/arith/factor.hpp"
#include "eqdist/arith/modular.hpp"
#include "eqdist/arith/phase.hpp"
#include "eqdist/arith/poly.hpp"
#include "eqdist/completion.hpp"
#include "eqdist/decomp.hpp"
#include "eqdist/dense_div.hpp"
#include "eqdist/exponents.hpp"
#include "eqdist/expsums.hpp"
#include "eqdist/fourier.hpp"
#include "eqdist/harness/audit.hpp"
#include "eqdist/harness/config.hpp"
#include "eqdist/harness/fspec.hpp"
#include "eqdist/harness/mpz.hpp"
#include "eqdist/harness/parallel.hpp"
#include "eqdist/harness/report.hpp"
#include "eqdist/harness/satotate.hpp"
#include "eqdist/harness/sieve.hpp"
