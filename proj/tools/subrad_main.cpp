#include "subrad/cli.hpp"

int main(int argc, char** argv) { return subrad::cli_main(argc, argv); }
