#include "nwt/cli.hpp"

int main(int argc, char** argv) { return nwt::cli::run_main(argc, argv); }
