#pragma once

#include "vagroup/bounds.hpp"
#include "vagroup/certify.hpp"
#include "vagroup/dynamics.hpp"
#include "vagroup/errors.hpp"
#include "vagroup/exact_arith.hpp"
#include "vagroup/fixtures.hpp"
#include "vagroup/parse.hpp"
#include "vagroup/plcore.hpp"
#include "vagroup/reduction.hpp"
#include "vagroup/text.hpp"
#include "vagroup/treepair.hpp"
#include "vagroup/vamap.hpp"
#include "vagroup/wordlen.hpp"
