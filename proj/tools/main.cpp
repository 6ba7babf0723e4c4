#include "cmz/cli.hpp"

int main(int argc, char** argv) { return cmz::cli::run(argc, argv); }
