#include "dialkit/cli.hpp"

int main(int argc, char** argv) { return dialkit::cli_main(argc, argv); }
