// Umbrella header.
#pragma once

#include "afsec/harness.hpp"
#include "afsec/json_io.hpp"
#include "afsec/model.hpp"
#include "afsec/numerics.hpp"
#include "afsec/oracle.hpp"
#include "afsec/power_min.hpp"
#include "afsec/rng.hpp"
#include "afsec/sdp.hpp"
#include "afsec/snr_max.hpp"
