#ifndef FOM_FOM_HPP
#define FOM_FOM_HPP

#include "fom/certificates.hpp"
#include "fom/config.hpp"
#include "fom/domain.hpp"
#include "fom/methods.hpp"
#include "fom/oracle.hpp"
#include "fom/problems.hpp"
#include "fom/prox.hpp"
#include "fom/ratefit.hpp"
#include "fom/rng.hpp"
#include "fom/saddle.hpp"
#include "fom/sparse.hpp"
#include "fom/svg.hpp"
#include "fom/trace.hpp"
#include "fom/vec.hpp"
#include "fom/zeroth_order.hpp"

#endif  // FOM_FOM_HPP
