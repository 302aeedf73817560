#include "freeobs/cli.hpp"

int main(int argc, char** argv) { return freeobs::cli_main(argc, argv); }
