#pragma once

#include "ewcert/hermitian.hpp"
#include "ewcert/random.hpp"
#include "ewcert/product_states.hpp"
#include "ewcert/tangent_space.hpp"
#include "ewcert/seesaw.hpp"
#include "ewcert/certifier.hpp"
#include "ewcert/choi.hpp"
#include "ewcert/presets.hpp"
#include "ewcert/json_io.hpp"
