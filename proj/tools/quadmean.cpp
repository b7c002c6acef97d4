#include "quadmean/cli.hpp"

int main(int argc, char** argv) { return quadmean::cli::run(argc, argv); }
