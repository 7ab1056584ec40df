#include "cli.hpp"

int main(int argc, char** argv) { return wilcfar::cli::run(argc, argv); }
