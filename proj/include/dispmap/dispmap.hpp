#pragma once

// Umbrella header: the full displacement toolkit.

#include <dispmap/numlin.hpp>
#include <dispmap/rng.hpp>
#include <dispmap/relations.hpp>
#include <dispmap/displacement.hpp>
#include <dispmap/isometry.hpp>
#include <dispmap/properties.hpp>
#include <dispmap/report.hpp>
#include <dispmap/suites.hpp>
#include <dispmap/gallery.hpp>
#include <dispmap/operator_spec.hpp>
#include <dispmap/serialize.hpp>
