#include "cli.hpp"

int main(int argc, char** argv) { return roomgt::cli::run(argc, argv); }
