#include "superint/cli.hpp"

int main(int argc, char** argv) { return superint::cli_main(argc, argv); }
