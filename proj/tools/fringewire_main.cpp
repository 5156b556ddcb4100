#include "fringewire/cli.hpp"

int main(int argc, char** argv) { return fringewire::cli::run(argc, argv); }
