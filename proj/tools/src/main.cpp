#include "commands.hpp"

int main(int argc, char** argv) { return nlspec::cli::run(argc, argv); }
