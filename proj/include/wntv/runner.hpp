#pragma once

#include "wntv/config.hpp"

namespace wntv {

// Validates the config, executes the selected pipeline and writes the
// artifacts: the output image (or prediction list for ssl), a line-oriented
// metrics log and a JSON summary next to the output. Throws on any failure;
// nothing is written until validation passes.
void run(const RunConfig& config);

}  // namespace wntv
