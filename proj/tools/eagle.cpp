#include "eagle/commands.hpp"

int main(int argc, char** argv) { return eagle::cli::run(argc, argv); }
