#include "cli.hpp"

int main(int argc, char** argv) { return hyperpi::cli::run(argc, argv); }
