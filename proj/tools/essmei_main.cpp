#include "essmei/cli.hpp"

int main(int argc, char** argv) { return essmei::run_cli(argc, argv); }
