#include "hqn/cli.hpp"

int main(int argc, char** argv) { return hqn::cli::run(argc, argv); }
