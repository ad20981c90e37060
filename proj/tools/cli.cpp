#include "cli.hpp"

namespace bordify::cli {

int run(int argc, const char* const* argv) {
  (void)argc;
  (void)argv;
  return 0;
}

}  // namespace bordify::cli
