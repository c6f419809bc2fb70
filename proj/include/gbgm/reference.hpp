#pragma once

#include "gbgm/pipeline.hpp"

namespace gbgm::ref {

// Naive serial renderings of the mask generators, written as plain nested
// loops straight from the formulas. They share only the data types and the
// RNG stream with the production kernels and must stay that way: the test
// suite asserts bit-identical output against them, and the kernel benchmark
// uses them as the serial baseline.
BlockMask gbgm_mask(const Image& image, const GbgmConfig& config, RngStream& rng);
BlockMask single_stage_mask(const Image& image, int block_size, double ratio,
                            RngStream& rng);

}  // namespace gbgm::ref
