#pragma once

#include "spacefill/geometry.hpp"
#include "spacefill/io.hpp"
#include "spacefill/metrics.hpp"
#include "spacefill/runner.hpp"
#include "spacefill/sequences.hpp"
#include "spacefill/theory.hpp"
