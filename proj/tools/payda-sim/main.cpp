#include "cli.hpp"

int main(int argc, char** argv) { return payda::cli_main(argc, argv); }
