#include "lorlab/cli.hpp"

int main(int argc, char** argv) { return lorlab::cli_main(argc, argv); }
