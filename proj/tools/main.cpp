#include "cli.hpp"

int main(int argc, char** argv) { return bordify::cli::run(argc, argv); }
