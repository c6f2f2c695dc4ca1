#include "planar/cli.hpp"

int main(int argc, char** argv) { return planar::cli::run(argc, argv); }
