#pragma once

#include "pfree/abelian.hpp"
#include "pfree/alon_kleitman.hpp"
#include "pfree/approx.hpp"
#include "pfree/bounds.hpp"
#include "pfree/brute.hpp"
#include "pfree/certificate.hpp"
#include "pfree/cyclic_interval.hpp"
#include "pfree/error.hpp"
#include "pfree/extract.hpp"
#include "pfree/families.hpp"
#include "pfree/group.hpp"
#include "pfree/halving.hpp"
#include "pfree/harness.hpp"
#include "pfree/homogeneous.hpp"
#include "pfree/io.hpp"
#include "pfree/localize.hpp"
#include "pfree/multset.hpp"
#include "pfree/petridis.hpp"
#include "pfree/quotient.hpp"
#include "pfree/rational.hpp"
#include "pfree/rng.hpp"
#include "pfree/solvable.hpp"
#include "pfree/subgroup.hpp"
