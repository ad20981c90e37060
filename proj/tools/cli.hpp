#pragma once

namespace bordify::cli {

int run(int argc, const char* const* argv);

}  // namespace bordify::cli
