#pragma once

#include "gsb/core_model.hpp"
#include "gsb/errors.hpp"
#include "gsb/fig2.hpp"
#include "gsb/lemma_bounds.hpp"
#include "gsb/regions.hpp"
#include "gsb/separation_scheme.hpp"
#include "gsb/serialize.hpp"
#include "gsb/tau_constructions.hpp"
