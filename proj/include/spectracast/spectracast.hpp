// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include "spectracast/camera.hpp"
#include "spectracast/colorimetry.hpp"
#include "spectracast/datagen.hpp"
#include "spectracast/error.hpp"
#include "spectracast/estimators.hpp"
#include "spectracast/io.hpp"
#include "spectracast/metrics.hpp"
#include "spectracast/rng.hpp"
#include "spectracast/training.hpp"
#include "spectracast/types.hpp"
#include "spectracast/video.hpp"
