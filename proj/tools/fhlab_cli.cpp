#include "fhlab/experiment.hpp"

int main(int argc, char** argv) { return fhlab::cli_main(argc, argv); }
