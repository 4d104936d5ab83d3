#pragma once

// Umbrella header.

#include "approxcodec/basis.hpp"
#include "approxcodec/caps.hpp"
#include "approxcodec/codec.hpp"
#include "approxcodec/descriptor.hpp"
#include "approxcodec/engine.hpp"
#include "approxcodec/errors.hpp"
#include "approxcodec/field.hpp"
#include "approxcodec/interval.hpp"
#include "approxcodec/json_io.hpp"
#include "approxcodec/kronecker.hpp"
#include "approxcodec/linear_form.hpp"
#include "approxcodec/param_real.hpp"
#include "approxcodec/rational.hpp"
#include "approxcodec/roundtrip.hpp"
#include "approxcodec/sine.hpp"
#include "approxcodec/system.hpp"
