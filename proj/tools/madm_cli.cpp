#include "madm/experiments.hpp"

int main(int argc, char** argv) { return madm::cli_main(argc, argv); }
