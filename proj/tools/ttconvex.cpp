#include "cli.hpp"

int main(int argc, char** argv) { return ttconvex::cli::run(argc, argv); }
