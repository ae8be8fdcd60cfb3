#include "hypertorus/cli.hpp"

int main(int argc, char** argv) { return hypertorus::cli::run(argc, argv); }
