#pragma once

#include "sampcap/capacity.hpp"
#include "sampcap/channels.hpp"
#include "sampcap/design.hpp"
#include "sampcap/errors.hpp"
#include "sampcap/linalg.hpp"
#include "sampcap/mmse.hpp"
#include "sampcap/oracle.hpp"
#include "sampcap/spectra.hpp"
#include "sampcap/waterfill.hpp"
