#include "ztwo/cli.hpp"

int main(int argc, char** argv) { return ztwo::cli::run(argc, argv); }
